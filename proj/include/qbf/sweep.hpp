#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qbf {

struct SweepRow {
  double parameter = 0.0;
  double value = 0.0;
  bool converged = true;
  /// Extra per-row numbers, named by SweepResult::diagnostic_names.
  std::vector<double> diagnostics;
};

/// Ordered table produced by a parameter sweep. Rows follow the input order,
/// which callers must supply strictly increasing.
struct SweepResult {
  std::vector<std::string> diagnostic_names;
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Throws InvalidArgument unless `values` is non-empty and strictly increasing.
void require_increasing(std::span<const double> values, const char* what);

}  // namespace qbf
