#include "trustsim/experiments.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace trustsim::harness {

namespace {
constexpr double kPi = 3.141592653589793;
}

bool is_valid_experiment_id(int id) { return id >= 1 && id <= 14; }

ExperimentSpec experiment_preset(int id) {
  ExperimentSpec spec;
  spec.id = std::to_string(id);
  auto& d = spec.dynamics;
  switch (id) {
    case 1:
      d.p_mu_change = 0.10;
      d.mu_change_magnitude = 1.0;
      break;
    case 2:
      d.p_profile_switch = 0.02;
      break;
    case 3:
      break;  // static
    case 4: d.p_provider_population_change = 0.02; break;
    case 5: d.p_provider_population_change = 0.05; break;
    case 6: d.p_provider_population_change = 0.10; break;
    case 7: d.p_provider_population_change = 0.20; break;
    case 8: d.p_provider_population_change = 0.30; break;
    case 9: d.p_consumer_population_change = 0.02; break;
    case 10: d.p_consumer_population_change = 0.05; break;
    case 11: d.p_consumer_population_change = 0.10; break;
    case 12:
      d.p_consumer_location_change = 0.10;
      d.max_angle_change = kPi / 20.0;
      break;
    case 13:
      d.p_provider_location_change = 0.10;
      d.max_angle_change = kPi / 20.0;
      break;
    case 14:
      d.p_mu_change = 0.10;
      d.mu_change_magnitude = 1.0;
      d.p_profile_switch = 0.02;
      d.p_provider_population_change = 0.02;
      d.p_consumer_population_change = 0.05;
      d.p_consumer_location_change = 0.10;
      d.p_provider_location_change = 0.10;
      d.max_angle_change = kPi / 20.0;
      break;
    default:
      throw std::invalid_argument("unknown experiment id: " + std::to_string(id));
  }
  return spec;
}

std::string describe_experiment(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "experiment " << spec.id << ":";
  const auto& d = spec.dynamics;
  if (d.all_zero()) out << " static";
  if (d.p_mu_change > 0.0) {
    out << " p_muC=" << d.p_mu_change << " M=" << d.mu_change_magnitude;
  }
  if (d.p_profile_switch > 0.0) out << " p_ProfileSwitch=" << d.p_profile_switch;
  if (d.p_provider_population_change > 0.0) out << " p_PPC=" << d.p_provider_population_change;
  if (d.p_consumer_population_change > 0.0) out << " p_CPC=" << d.p_consumer_population_change;
  if (d.p_consumer_location_change > 0.0) out << " p_CLC=" << d.p_consumer_location_change;
  if (d.p_provider_location_change > 0.0) out << " p_PLC=" << d.p_provider_location_change;
  if (d.max_angle_change > 0.0) out << " dPhi=" << d.max_angle_change;
  return out.str();
}

std::vector<sim::InteractionLog> run_experiment(const ExperimentSpec& spec,
                                                int parallelism, std::ostream* trace) {
  const int runs = std::max(0, spec.nsir);
  std::vector<std::vector<sim::InteractionLog>> per_run(runs);

  auto execute = [&](int run_index) {
    per_run[run_index] = sim::run_simulation(
        spec.world, spec.dynamics, spec.models,
        spec.base_seed + static_cast<std::uint64_t>(run_index), run_index,
        parallelism <= 1 ? trace : nullptr);
  };

  if (parallelism <= 1 || runs <= 1) {
    for (int i = 0; i < runs; ++i) execute(i);
  } else {
    std::vector<std::thread> workers;
    const int n_workers = std::min(parallelism, runs);
    std::atomic<int> next{0};
    workers.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      workers.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) execute(i);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::vector<sim::InteractionLog> merged;
  std::size_t total = 0;
  for (const auto& logs : per_run) total += logs.size();
  merged.reserve(total);
  for (auto& logs : per_run) {
    merged.insert(merged.end(), logs.begin(), logs.end());
  }
  return merged;
}

ExperimentResult summarize(const ExperimentSpec& spec,
                           std::span<const sim::InteractionLog> logs) {
  ExperimentResult result;
  const SampleTable table(logs);
  result.index_cap = table.index_cap(spec.export_min_count);

  for (AggregateRow& row : table.aggregate(spec.id)) {
    if (result.index_cap > 0 && row.interaction_index > result.index_cap) continue;
    result.aggregate.push_back(std::move(row));
  }

  auto append = [&](world::Group a, world::Group b) {
    for (RankRow& row : rank_pair(table, spec.id, a, b, 0.05, result.index_cap)) {
      result.ranks.push_back(std::move(row));
    }
  };
  append(world::Group::kCaOld, world::Group::kCaNew);
  append(world::Group::kFire, world::Group::kCaNew);
  std::sort(result.ranks.begin(), result.ranks.end(),
            [](const RankRow& a, const RankRow& b) {
              if (a.experiment != b.experiment) return a.experiment < b.experiment;
              if (a.interaction_index != b.interaction_index) {
                return a.interaction_index < b.interaction_index;
              }
              const std::string ga = world::group_name(a.group_a);
              const std::string gb = world::group_name(b.group_a);
              return ga < gb;
            });
  return result;
}

}  // namespace trustsim::harness
