#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "trustsim/config.hpp"
#include "trustsim/csv_export.hpp"
#include "trustsim/experiments.hpp"
#include "trustsim/verify.hpp"

using namespace trustsim;
using harness::AggregateRow;
using harness::ExperimentSpec;
using harness::RankRow;
using harness::SampleTable;
using sim::InteractionLog;
using world::Group;

namespace {

InteractionLog row(Group group, std::int32_t index, double ug, std::int32_t run = 0) {
  InteractionLog log;
  log.run_id = run;
  log.group = group;
  log.interaction_index = index;
  log.ug = ug;
  return log;
}

ExperimentSpec small_spec(int rounds = 25, int nsir = 2) {
  ExperimentSpec spec;
  spec.id = "custom";
  spec.world.rounds = rounds;
  spec.world.n_providers = 12;
  spec.world.n_good = 2;
  spec.world.n_ordinary = 4;
  spec.world.n_intermittent = 1;
  spec.world.n_bad = 5;
  spec.world.n_consumers = 18;
  spec.nsir = nsir;
  spec.base_seed = 77;
  spec.export_min_count = 1;
  return spec;
}

}  // namespace

TEST_CASE("aggregation groups by consumer group and interaction index") {
  SUBCASE("single row") {
    const std::vector<InteractionLog> logs{row(Group::kFire, 1, 7.0)};
    const auto rows = SampleTable(logs).aggregate("x");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_ug == 7.0);
    CHECK(rows[0].sample_count == 1);
    CHECK(rows[0].std_dev == 0.0);
  }

  SUBCASE("mean and sample deviation by hand") {
    const std::vector<InteractionLog> logs{row(Group::kCaNew, 3, 4.0),
                                           row(Group::kCaNew, 3, 6.0)};
    const auto rows = SampleTable(logs).aggregate("x");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_ug == doctest::Approx(5.0));
    CHECK(rows[0].std_dev == doctest::Approx(std::sqrt(2.0)));
  }

  SUBCASE("empty logs produce an empty table") {
    CHECK(SampleTable({}).aggregate("x").empty());
  }

  SUBCASE("rows come out sorted by group name then index") {
    const std::vector<InteractionLog> logs{
        row(Group::kFire, 2, 1.0), row(Group::kFire, 1, 1.0),
        row(Group::kCaOld, 1, 1.0), row(Group::kCaNew, 1, 1.0)};
    const auto rows = SampleTable(logs).aggregate("x");
    REQUIRE(rows.size() == 4);
    CHECK(world::group_name(rows[0].group) == std::string("CA_NEW"));
    CHECK(world::group_name(rows[1].group) == std::string("CA_OLD"));
    CHECK(world::group_name(rows[2].group) == std::string("FIRE"));
    CHECK(rows[2].interaction_index == 1);
    CHECK(rows[3].interaction_index == 2);
  }
}

TEST_CASE("merged-run means equal the count-weighted mean of per-run means") {
  Rng rng(42);
  std::vector<InteractionLog> merged;
  double weighted = 0.0;
  std::int64_t total = 0;
  for (int run = 0; run < 4; ++run) {
    const int n = 5 + static_cast<int>(rng.uniform_int(0, 10));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ug = rng.uniform(-10.0, 10.0);
      merged.push_back(row(Group::kFire, 1, ug, run));
      sum += ug;
    }
    weighted += sum;
    total += n;
  }
  const auto rows = SampleTable(merged).aggregate("x");
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].mean_ug - weighted / total) <= 1e-9);
}

TEST_CASE("ranking ties on insignificance and rewards the larger mean") {
  std::vector<InteractionLog> logs;
  // Index 1: clear separation. Index 2: identical. Index 3: CA_NEW only.
  for (int i = 0; i < 30; ++i) {
    logs.push_back(row(Group::kCaOld, 1, 1.0 + 0.01 * i));
    logs.push_back(row(Group::kCaNew, 1, 8.0 + 0.01 * i));
    logs.push_back(row(Group::kCaOld, 2, 5.0 + 0.01 * i));
    logs.push_back(row(Group::kCaNew, 2, 5.0 + 0.01 * i));
    logs.push_back(row(Group::kCaNew, 3, 2.0));
  }
  const SampleTable table(logs);
  const auto rows = harness::rank_pair(table, "x", Group::kCaOld, Group::kCaNew);
  REQUIRE(rows.size() == 2);  // index 3 omitted: CA_OLD missing

  CHECK(rows[0].interaction_index == 1);
  CHECK(rows[0].rank_a == 1);
  CHECK(rows[0].rank_b == 2);
  CHECK(rows[0].p_value < 0.05);

  CHECK(rows[1].interaction_index == 2);
  CHECK(rows[1].rank_a == 1);
  CHECK(rows[1].rank_b == 1);
}

TEST_CASE("the index cap tracks the minimum per-group sample floor") {
  std::vector<InteractionLog> logs;
  for (int i = 0; i < 40; ++i) {
    logs.push_back(row(Group::kFire, 1, 1.0));
    logs.push_back(row(Group::kCaNew, 1, 1.0));
  }
  for (int i = 0; i < 40; ++i) logs.push_back(row(Group::kFire, 2, 1.0));
  for (int i = 0; i < 5; ++i) logs.push_back(row(Group::kCaNew, 2, 1.0));
  const SampleTable table(logs);
  CHECK(table.index_cap(30) == 1);
  CHECK(table.index_cap(5) == 2);
  CHECK(table.index_cap(1000) == 0);
}

TEST_CASE("CSV output is byte-stable and locale-free") {
  AggregateRow agg;
  agg.experiment = "3";
  agg.group = Group::kCaNew;
  agg.interaction_index = 4;
  agg.mean_ug = 5.25;
  agg.sample_count = 12;
  agg.std_dev = 1.5;

  const std::string csv = harness::aggregate_csv({&agg, 1});
  CHECK(csv ==
        "experiment,group,interaction_index,mean_ug,sample_count,std_dev\n"
        "3,CA_NEW,4,5.250000,12,1.500000\n");
  CHECK(harness::aggregate_csv({&agg, 1}) == csv);

  CHECK(harness::aggregate_csv({}) ==
        "experiment,group,interaction_index,mean_ug,sample_count,std_dev\n");
  CHECK(harness::ranks_csv({}) ==
        "experiment,interaction_index,group_a,group_b,mean_a,mean_b,p_value,rank_a,rank_b\n");

  RankRow rank;
  rank.experiment = "3";
  rank.interaction_index = 4;
  rank.group_a = Group::kFire;
  rank.group_b = Group::kCaNew;
  rank.mean_a = -0.5;
  rank.mean_b = 1.0;
  rank.p_value = 0.0105;
  rank.rank_a = 1;
  rank.rank_b = 2;
  CHECK(harness::ranks_csv({&rank, 1}) ==
        "experiment,interaction_index,group_a,group_b,mean_a,mean_b,p_value,rank_a,rank_b\n"
        "3,4,FIRE,CA_NEW,-0.500000,1.000000,0.010500,1,2\n");

  const std::string plot = harness::plot_data({&rank, 1}, Group::kFire, Group::kCaNew);
  CHECK(plot ==
        "interaction_index,mean_FIRE,mean_CA_NEW,rank_FIRE,rank_CA_NEW\n"
        "4,-0.500000,1.000000,1,2\n");
}

TEST_CASE("config text overrides any documented field") {
  ExperimentSpec spec;
  harness::apply_config_text(spec,
                             "# comment line\n"
                             "rounds = 100\n"
                             "consumers=60   # trailing comment\n"
                             "p_ppc = 0.25\n"
                             "ca_threshold=0.6\n"
                             "fire_exploration = 0.2\n"
                             "export_min_count = 5\n"
                             "\n");
  CHECK(spec.world.rounds == 100);
  CHECK(spec.world.n_consumers == 60);
  CHECK(spec.dynamics.p_provider_population_change == 0.25);
  CHECK(spec.models.ca.threshold == 0.6);
  CHECK(spec.models.fire.exploration == 0.2);
  CHECK(spec.export_min_count == 5);
}

TEST_CASE("malformed config lines are rejected with the line number") {
  ExperimentSpec spec;
  CHECK_THROWS_AS(harness::apply_config_text(spec, "bogus_key = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(harness::apply_config_text(spec, "rounds 100\n"), std::invalid_argument);
  CHECK_THROWS_AS(harness::apply_config_text(spec, "rounds = ten\n"),
                  std::invalid_argument);
}

TEST_CASE("the experiment manifest binds the published settings") {
  using harness::experiment_preset;
  CHECK(experiment_preset(1).dynamics.p_mu_change == 0.10);
  CHECK(experiment_preset(1).dynamics.mu_change_magnitude == 1.0);
  CHECK(experiment_preset(2).dynamics.p_profile_switch == 0.02);
  CHECK(experiment_preset(3).dynamics.all_zero());
  const double ppc[] = {0.02, 0.05, 0.10, 0.20, 0.30};
  for (int id = 4; id <= 8; ++id) {
    CHECK(experiment_preset(id).dynamics.p_provider_population_change == ppc[id - 4]);
  }
  const double cpc[] = {0.02, 0.05, 0.10};
  for (int id = 9; id <= 11; ++id) {
    CHECK(experiment_preset(id).dynamics.p_consumer_population_change == cpc[id - 9]);
  }
  CHECK(experiment_preset(12).dynamics.p_consumer_location_change == 0.10);
  CHECK(experiment_preset(12).dynamics.max_angle_change ==
        doctest::Approx(3.141592653589793 / 20.0));
  CHECK(experiment_preset(13).dynamics.p_provider_location_change == 0.10);
  const auto all = experiment_preset(14).dynamics;
  CHECK(all.p_mu_change == 0.10);
  CHECK(all.mu_change_magnitude == 1.0);
  CHECK(all.p_profile_switch == 0.02);
  CHECK(all.p_provider_population_change == 0.02);
  CHECK(all.p_consumer_population_change == 0.05);
  CHECK(all.p_consumer_location_change == 0.10);
  CHECK(all.p_provider_location_change == 0.10);
  CHECK(all.max_angle_change == doctest::Approx(3.141592653589793 / 20.0));
  CHECK_FALSE(harness::is_valid_experiment_id(0));
  CHECK_FALSE(harness::is_valid_experiment_id(15));

  // Table defaults carried by every preset.
  const auto spec = experiment_preset(3);
  CHECK(spec.world.rounds == 500);
  CHECK(spec.world.n_providers == 100);
  CHECK(spec.world.n_consumers == 500);
  CHECK(spec.models.ca.threshold == 0.5);
  CHECK(spec.models.fire.history_size == 10);
  CHECK(spec.models.fire.recency_scale == doctest::Approx(-5.0 / std::log(0.5)));
  CHECK(spec.models.fire.w_certified == 0.5);
}

TEST_CASE("a single-run experiment equals a direct simulation") {
  ExperimentSpec spec = small_spec(20, 1);
  const auto direct = sim::run_simulation(spec.world, spec.dynamics, spec.models,
                                          spec.base_seed, 0);
  const auto via_harness = harness::run_experiment(spec, 1);
  REQUIRE(direct.size() == via_harness.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(direct[i].consumer == via_harness[i].consumer);
    CHECK(direct[i].ug == via_harness[i].ug);
  }
}

TEST_CASE("experiments merge deterministically regardless of parallelism") {
  ExperimentSpec spec = small_spec(20, 3);
  const auto serial = harness::run_experiment(spec, 1);
  const auto repeat = harness::run_experiment(spec, 1);
  const auto threaded = harness::run_experiment(spec, 3);
  REQUIRE(serial.size() == repeat.size());
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].run_id == threaded[i].run_id);
    CHECK(serial[i].consumer == threaded[i].consumer);
    CHECK(serial[i].ug == threaded[i].ug);
    CHECK(serial[i].ug == repeat[i].ug);
  }
  // Runs are tagged 0..nsir-1 and appear in order.
  std::int32_t last_run = 0;
  for (const auto& log : serial) {
    CHECK(log.run_id >= last_run);
    last_run = log.run_id;
  }
  CHECK(last_run == 2);
}

TEST_CASE("summaries cap indices and emit both published comparisons") {
  ExperimentSpec spec = small_spec(30, 2);
  const auto logs = harness::run_experiment(spec, 1);
  const auto result = harness::summarize(spec, logs);
  CHECK(result.index_cap > 0);
  bool saw_old_new = false;
  bool saw_fire_new = false;
  for (const auto& rank : result.ranks) {
    CHECK(rank.interaction_index <= result.index_cap);
    if (rank.group_a == Group::kCaOld && rank.group_b == Group::kCaNew) saw_old_new = true;
    if (rank.group_a == Group::kFire && rank.group_b == Group::kCaNew) saw_fire_new = true;
  }
  CHECK(saw_old_new);
  CHECK(saw_fire_new);
  for (const auto& agg : result.aggregate) {
    CHECK(agg.interaction_index <= result.index_cap);
  }
}

TEST_CASE("the analytical checks all pass") {
  const auto results = harness::run_analytical_checks();
  CHECK(results.size() == 6);
  for (const auto& check : results) {
    INFO(check.name, ": ", check.detail);
    CHECK(check.pass);
  }
}
