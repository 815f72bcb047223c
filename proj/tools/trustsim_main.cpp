// Command-line front end: runs preset or custom experiments, exports the
// aggregate/rank CSVs and optional plot data, verifies the analytical oracle
// suite, and lists the experiment manifest.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "trustsim/config.hpp"
#include "trustsim/csv_export.hpp"
#include "trustsim/experiments.hpp"
#include "trustsim/verify.hpp"

namespace {

namespace hn = trustsim::harness;

int cmd_run(const std::string& experiment, int nsir, std::uint64_t seed,
            const std::string& out_dir, const std::string& config_path, int parallel,
            bool trace, bool plots) {
  hn::ExperimentSpec spec;
  if (experiment == "custom") {
    spec.id = "custom";
  } else {
    int id = 0;
    try {
      id = std::stoi(experiment);
    } catch (const std::exception&) {
      std::cerr << "error: unknown experiment '" << experiment << "'\n";
      return 2;
    }
    if (!hn::is_valid_experiment_id(id)) {
      std::cerr << "error: unknown experiment '" << experiment << "' (expected 1..14 or custom)\n";
      return 2;
    }
    spec = hn::experiment_preset(id);
  }
  spec.nsir = nsir;
  spec.base_seed = seed;
  if (!config_path.empty()) {
    try {
      hn::apply_config_file(spec, config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  try {
    std::filesystem::create_directories(out_dir);
    const auto logs = hn::run_experiment(spec, parallel, trace ? &std::cout : nullptr);
    const hn::ExperimentResult result = hn::summarize(spec, logs);

    const std::filesystem::path out(out_dir);
    hn::write_file((out / "aggregate.csv").string(), hn::aggregate_csv(result.aggregate));
    hn::write_file((out / "ranks.csv").string(), hn::ranks_csv(result.ranks));
    if (plots) {
      hn::write_file((out / "plot_CA_OLD_vs_CA_NEW.csv").string(),
                     hn::plot_data(result.ranks, trustsim::world::Group::kCaOld,
                                   trustsim::world::Group::kCaNew));
      hn::write_file((out / "plot_FIRE_vs_CA_NEW.csv").string(),
                     hn::plot_data(result.ranks, trustsim::world::Group::kFire,
                                   trustsim::world::Group::kCaNew));
    }
    std::cout << "experiment " << spec.id << ": " << logs.size() << " interactions over "
              << spec.nsir << " runs, index cap " << result.index_cap << "\n"
              << "wrote " << (out / "aggregate.csv").string() << " and "
              << (out / "ranks.csv").string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_verify() {
  const auto results = hn::run_analytical_checks();
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
  }
  return hn::all_passed(results) ? 0 : 1;
}

int cmd_list() {
  for (int id = 1; id <= 14; ++id) {
    std::cout << hn::describe_experiment(hn::experiment_preset(id)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trust model simulation workbench"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment and export CSV results");
  std::string experiment;
  int nsir = 30;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  std::string config_path;
  int parallel = 1;
  bool trace = false;
  bool plots = false;
  run->add_option("--experiment", experiment, "experiment id (1..14) or 'custom'")
      ->required();
  run->add_option("--nsir", nsir, "number of independent runs")->default_val(30);
  run->add_option("--seed", seed, "base seed; run k uses seed+k")->default_val(1);
  run->add_option("--out", out_dir, "output directory")->default_val("results");
  run->add_option("--config", config_path, "key=value config file overriding defaults");
  run->add_option("--parallel", parallel, "worker threads across runs")->default_val(1);
  run->add_flag("--trace", trace, "print one line per interaction");
  run->add_flag("--plots", plots, "also write per-comparison plot data files");

  auto* verify = app.add_subcommand("verify", "run the analytical oracle suite");
  auto* list = app.add_subcommand("list", "print the experiment manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    return cmd_run(experiment, nsir, seed, out_dir, config_path, parallel, trace, plots);
  }
  if (verify->parsed()) return cmd_verify();
  if (list->parsed()) return cmd_list();
  return 2;
}
