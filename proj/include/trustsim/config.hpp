#pragma once

#include <string>

#include "trustsim/experiments.hpp"

// Flat key=value configuration files; '#' starts a comment. Keys override the
// world, dynamics, CA, FIRE, and export fields by their documented names (see
// README). Unknown keys or unparsable values raise std::invalid_argument.

namespace trustsim::harness {

void apply_config_line(ExperimentSpec& spec, const std::string& line, int line_number);
void apply_config_text(ExperimentSpec& spec, const std::string& text);
void apply_config_file(ExperimentSpec& spec, const std::string& path);

}  // namespace trustsim::harness
