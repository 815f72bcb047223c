#include "trustsim/csv_export.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace trustsim::harness {

std::string format_fixed(double value, int precision) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::fixed, precision);
  return {buffer, result.ptr};
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::string out = "experiment,group,interaction_index,mean_ug,sample_count,std_dev\n";
  for (const AggregateRow& row : rows) {
    out += row.experiment;
    out += ',';
    out += world::group_name(row.group);
    out += ',';
    out += std::to_string(row.interaction_index);
    out += ',';
    out += format_fixed(row.mean_ug);
    out += ',';
    out += std::to_string(row.sample_count);
    out += ',';
    out += format_fixed(row.std_dev);
    out += '\n';
  }
  return out;
}

std::string ranks_csv(std::span<const RankRow> rows) {
  std::string out =
      "experiment,interaction_index,group_a,group_b,mean_a,mean_b,p_value,rank_a,rank_b\n";
  for (const RankRow& row : rows) {
    out += row.experiment;
    out += ',';
    out += std::to_string(row.interaction_index);
    out += ',';
    out += world::group_name(row.group_a);
    out += ',';
    out += world::group_name(row.group_b);
    out += ',';
    out += format_fixed(row.mean_a);
    out += ',';
    out += format_fixed(row.mean_b);
    out += ',';
    out += format_fixed(row.p_value);
    out += ',';
    out += std::to_string(row.rank_a);
    out += ',';
    out += std::to_string(row.rank_b);
    out += '\n';
  }
  return out;
}

std::string plot_data(std::span<const RankRow> rows, world::Group a, world::Group b) {
  std::string out = "interaction_index,mean_";
  out += world::group_name(a);
  out += ",mean_";
  out += world::group_name(b);
  out += ",rank_";
  out += world::group_name(a);
  out += ",rank_";
  out += world::group_name(b);
  out += '\n';
  for (const RankRow& row : rows) {
    if (row.group_a != a || row.group_b != b) continue;
    out += std::to_string(row.interaction_index);
    out += ',';
    out += format_fixed(row.mean_a);
    out += ',';
    out += format_fixed(row.mean_b);
    out += ',';
    out += std::to_string(row.rank_a);
    out += ',';
    out += std::to_string(row.rank_b);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace trustsim::harness
