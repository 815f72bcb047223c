#include "trustsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace trustsim::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key, int line_number) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto result = std::from_chars(first, last, out);
  if (result.ec != std::errc{} || result.ptr != last) {
    throw std::invalid_argument("config line " + std::to_string(line_number) +
                                ": bad numeric value for '" + key + "': " + value);
  }
  return out;
}

}  // namespace

void apply_config_line(ExperimentSpec& spec, const std::string& raw, int line_number) {
  std::string line = raw;
  const auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  line = trim(line);
  if (line.empty()) return;

  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("config line " + std::to_string(line_number) +
                                ": expected key=value, got: " + line);
  }
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key.empty() || value.empty()) {
    throw std::invalid_argument("config line " + std::to_string(line_number) +
                                ": empty key or value");
  }

  using Setter = void (*)(ExperimentSpec&, double);
  static const std::unordered_map<std::string, Setter> setters = {
      // world
      {"rounds", [](ExperimentSpec& s, double v) { s.world.rounds = static_cast<int>(v); }},
      {"providers", [](ExperimentSpec& s, double v) { s.world.n_providers = static_cast<int>(v); }},
      {"providers_good", [](ExperimentSpec& s, double v) { s.world.n_good = static_cast<int>(v); }},
      {"providers_ordinary", [](ExperimentSpec& s, double v) { s.world.n_ordinary = static_cast<int>(v); }},
      {"providers_intermittent", [](ExperimentSpec& s, double v) { s.world.n_intermittent = static_cast<int>(v); }},
      {"providers_bad", [](ExperimentSpec& s, double v) { s.world.n_bad = static_cast<int>(v); }},
      {"consumers", [](ExperimentSpec& s, double v) { s.world.n_consumers = static_cast<int>(v); }},
      {"activity_min", [](ExperimentSpec& s, double v) { s.world.activity_min = v; }},
      {"activity_max", [](ExperimentSpec& s, double v) { s.world.activity_max = v; }},
      // dynamics
      {"p_cpc", [](ExperimentSpec& s, double v) { s.dynamics.p_consumer_population_change = v; }},
      {"p_ppc", [](ExperimentSpec& s, double v) { s.dynamics.p_provider_population_change = v; }},
      {"p_clc", [](ExperimentSpec& s, double v) { s.dynamics.p_consumer_location_change = v; }},
      {"p_plc", [](ExperimentSpec& s, double v) { s.dynamics.p_provider_location_change = v; }},
      {"delta_phi", [](ExperimentSpec& s, double v) { s.dynamics.max_angle_change = v; }},
      {"p_mu_change", [](ExperimentSpec& s, double v) { s.dynamics.p_mu_change = v; }},
      {"mu_change_magnitude", [](ExperimentSpec& s, double v) { s.dynamics.mu_change_magnitude = v; }},
      {"p_profile_switch", [](ExperimentSpec& s, double v) { s.dynamics.p_profile_switch = v; }},
      // CA
      {"ca_threshold", [](ExperimentSpec& s, double v) { s.models.ca.threshold = v; }},
      {"ca_alpha", [](ExperimentSpec& s, double v) { s.models.ca.alpha = v; }},
      {"ca_beta", [](ExperimentSpec& s, double v) { s.models.ca.beta = v; }},
      // FIRE
      {"fire_history", [](ExperimentSpec& s, double v) { s.models.fire.history_size = static_cast<int>(v); }},
      {"fire_recency_scale", [](ExperimentSpec& s, double v) { s.models.fire.recency_scale = v; }},
      {"fire_branching", [](ExperimentSpec& s, double v) { s.models.fire.branching_factor = static_cast<int>(v); }},
      {"fire_referral_length", [](ExperimentSpec& s, double v) { s.models.fire.referral_length = static_cast<int>(v); }},
      {"fire_w_it", [](ExperimentSpec& s, double v) { s.models.fire.w_interaction = v; }},
      {"fire_w_rt", [](ExperimentSpec& s, double v) { s.models.fire.w_role = v; }},
      {"fire_w_wr", [](ExperimentSpec& s, double v) { s.models.fire.w_witness = v; }},
      {"fire_w_cr", [](ExperimentSpec& s, double v) { s.models.fire.w_certified = v; }},
      {"fire_gamma_it", [](ExperimentSpec& s, double v) { s.models.fire.gamma_interaction = v; }},
      {"fire_gamma_rt", [](ExperimentSpec& s, double v) { s.models.fire.gamma_role = v; }},
      {"fire_gamma_wr", [](ExperimentSpec& s, double v) { s.models.fire.gamma_witness = v; }},
      {"fire_gamma_cr", [](ExperimentSpec& s, double v) { s.models.fire.gamma_certified = v; }},
      {"fire_exploration", [](ExperimentSpec& s, double v) { s.models.fire.exploration = v; }},
      // export
      {"export_min_count", [](ExperimentSpec& s, double v) { s.export_min_count = static_cast<std::int64_t>(v); }},
  };

  auto it = setters.find(key);
  if (it == setters.end()) {
    throw std::invalid_argument("config line " + std::to_string(line_number) +
                                ": unknown key '" + key + "'");
  }
  it->second(spec, parse_double(value, key, line_number));
}

void apply_config_text(ExperimentSpec& spec, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    apply_config_line(spec, line, line_number);
  }
}

void apply_config_file(ExperimentSpec& spec, const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  apply_config_text(spec, buffer.str());
}

}  // namespace trustsim::harness
