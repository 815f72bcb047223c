#pragma once

#include <span>
#include <string>

#include "trustsim/stats.hpp"

// CSV writers with locale-independent, byte-deterministic output: UTF-8,
// '\n' line endings, '.' decimal separator, six decimal places.

namespace trustsim::harness {

std::string format_fixed(double value, int precision = 6);

std::string aggregate_csv(std::span<const AggregateRow> rows);
std::string ranks_csv(std::span<const RankRow> rows);

// Per-comparison plot data: one file per (group_a, group_b) pair with columns
// interaction_index, mean_a, mean_b, rank_a, rank_b.
std::string plot_data(std::span<const RankRow> rows, world::Group a, world::Group b);

// Throws std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace trustsim::harness
