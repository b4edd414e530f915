#pragma once

#include <string>
#include <vector>

namespace osfrl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // empty on pass, failure description otherwise
};

// Runs the named invariant checks of every module. `quick` skips the
// table-reproduction integration checks (the only ones that take more
// than a few seconds).
std::vector<CheckResult> run_verification(bool quick);

}  // namespace osfrl
