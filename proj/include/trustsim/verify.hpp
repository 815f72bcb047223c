#pragma once

#include <string>
#include <vector>

namespace trustsim::harness {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The analytical oracle suite: equation-level weight updates, the scripted
// four-consumer replay, cold-start averaging under a constant failer, the
// one-trial learning and always-execute scenarios, and V3 early detection.
// Deterministic and fast (well under a second).
std::vector<CheckResult> run_analytical_checks();

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace trustsim::harness
