#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mrfnet {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast invariant self-checks over the model, sampler, estimator and metrics.
// Each runs in well under a second on small instances.
std::vector<CheckResult> run_self_checks(std::uint64_t seed = 1);

}  // namespace mrfnet
