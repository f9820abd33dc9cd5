#include "qbf/sweep.hpp"

#include <cmath>

#include "qbf/errors.hpp"

namespace qbf {

void require_increasing(std::span<const double> values, const char* what) {
  if (values.empty()) throw InvalidArgument(std::string(what) + ": no sweep values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InvalidArgument(std::string(what) + ": non-finite value");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw InvalidArgument(std::string(what) + ": values must be strictly increasing");
  }
}

}  // namespace qbf
