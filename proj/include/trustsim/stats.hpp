#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trustsim/kernel.hpp"

namespace trustsim::harness {

// Two-tailed p-value of the Student-t distribution, via the regularized
// incomplete beta function.
double student_t_two_tailed_p(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

// Welch's unequal-variance two-sample t-test. Degenerate inputs (either
// sample smaller than two, or both variances zero) resolve by mean equality:
// equal means give p = 1, unequal means with no variance give p = 0.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha = 0.05);

struct AggregateRow {
  std::string experiment;
  world::Group group = world::Group::kFire;
  std::int32_t interaction_index = 0;
  double mean_ug = 0.0;
  std::int64_t sample_count = 0;
  double std_dev = 0.0;  // sample standard deviation (n-1); 0 when n < 2
};

// Raw UG samples per (group, interaction index), pooled across consumers and
// runs; the shared backing for aggregation and ranking.
class SampleTable {
 public:
  explicit SampleTable(std::span<const sim::InteractionLog> logs);

  std::span<const double> samples(world::Group group, std::int32_t index) const;
  std::vector<std::int32_t> indices() const;  // sorted union over groups
  std::int32_t max_index() const;

  // Highest index at which every group present in the table has at least
  // min_count samples; 0 when no index qualifies.
  std::int32_t index_cap(std::int64_t min_count) const;

  std::vector<AggregateRow> aggregate(const std::string& experiment) const;

 private:
  std::map<std::pair<int, std::int32_t>, std::vector<double>> cells_;
  std::vector<world::Group> groups_present_;
};

struct RankRow {
  std::string experiment;
  std::int32_t interaction_index = 0;
  world::Group group_a = world::Group::kFire;
  world::Group group_b = world::Group::kFire;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double p_value = 1.0;
  int rank_a = 1;
  int rank_b = 1;
};

// Pairwise per-index ranking: both groups rank 1 when the t-test finds no
// significant difference; otherwise the larger mean ranks 2. Indices where
// either group has no samples are omitted.
std::vector<RankRow> rank_pair(const SampleTable& table, const std::string& experiment,
                               world::Group a, world::Group b, double alpha = 0.05,
                               std::int32_t index_limit = 0);

double mean_of(std::span<const double> xs);

}  // namespace trustsim::harness
