#pragma once

#include <string>
#include <vector>

namespace tripod {

// Options for the verification suite. full adds resolution-1024 grid checks
// and the large-sample round trip. jacobianScale multiplies the analytic
// volume-map Jacobian before it is compared against finite differences; it
// exists so a deliberately wrong factor can demonstrate that the suite
// catches exactly the Jacobian comparisons, and must be 1 for real runs.
struct VerifyOptions {
  bool full = false;
  double jacobianScale = 1.0;
};

// One named check: pass iff residual <= tolerance (NaN fails).
struct VerifyCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int failed = 0;
};

VerifyReport run_verify_suite(const VerifyOptions& options);

}  // namespace tripod
