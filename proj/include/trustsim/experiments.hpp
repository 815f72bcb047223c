#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trustsim/kernel.hpp"
#include "trustsim/stats.hpp"

namespace trustsim::harness {

struct ExperimentSpec {
  std::string id = "custom";
  world::WorldConfig world;
  world::DynamicsConfig dynamics;
  sim::ModelParams models;
  int nsir = 30;                    // independent runs
  std::uint64_t base_seed = 1;
  std::int64_t export_min_count = 30;  // per-group sample floor for the index cap
};

// The fourteen preset environments:
//   1  performance drift (p_muC = 0.10, M = 1.0)
//   2  profile switching (p_ProfileSwitch = 0.02)
//   3  static
//   4-8  provider churn at 2%, 5%, 10%, 20%, 30%
//   9-11 consumer churn at 2%, 5%, 10%
//   12 consumer location drift (p_CLC = 0.10, dPhi = pi/20)
//   13 provider location drift (p_PLC = 0.10, dPhi = pi/20)
//   14 all factors combined
ExperimentSpec experiment_preset(int id);
bool is_valid_experiment_id(int id);
std::string describe_experiment(const ExperimentSpec& spec);

// Runs spec.nsir simulations with seeds base_seed + run_index (run ids
// 0-based), optionally across threads; logs are merged in run-index order so
// the result is independent of the degree of parallelism.
std::vector<sim::InteractionLog> run_experiment(const ExperimentSpec& spec,
                                                int parallelism = 1,
                                                std::ostream* trace = nullptr);

struct ExperimentResult {
  std::vector<AggregateRow> aggregate;
  std::vector<RankRow> ranks;
  std::int32_t index_cap = 0;
};

// Aggregation plus the two published pairwise rankings (CA_OLD vs CA_NEW and
// FIRE vs CA_NEW), capped at the highest index where every group keeps at
// least spec.export_min_count samples.
ExperimentResult summarize(const ExperimentSpec& spec,
                           std::span<const sim::InteractionLog> logs);

}  // namespace trustsim::harness
