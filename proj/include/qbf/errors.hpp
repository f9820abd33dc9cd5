#pragma once

#include <stdexcept>
#include <string>

namespace qbf {

/// Raised for out-of-range parameters and malformed inputs (CLI exit code 2).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class of all numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class NoBracket : public NumericalError {
 public:
  explicit NoBracket(const std::string& what) : NumericalError("bisect", what) {}
};

class NonFinite : public NumericalError {
 public:
  explicit NonFinite(const std::string& what) : NumericalError("bisect", what) {}
};

class NonConvergence : public NumericalError {
 public:
  explicit NonConvergence(const std::string& what) : NumericalError("sym_eig_max", what) {}
};

class QuadratureNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qbf
