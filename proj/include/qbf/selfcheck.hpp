#pragma once

#include <string>
#include <vector>

namespace qbf {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  ///< measured value(s) and the bound they were held to
};

struct SelfcheckOptions {
  /// Flip the sign of every kernel entry before the maximal-backflow checks.
  bool inject_kernel_sign_fault = false;
};

/// Runs every module invariant plus the headline reproduction checks at
/// reduced resolution. Deterministic: two runs give identical results.
std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opts = {});

/// One "PASS name: detail" / "FAIL name: detail" line per check and a
/// closing summary line.
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace qbf
