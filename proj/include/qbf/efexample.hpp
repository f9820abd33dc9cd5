#pragma once

// Effective current of the example state observed through a Gaussian
// precision function of dimensionless width s = sigma_tilde / alpha.

#include <span>

#include "qbf/sweep.hpp"

namespace qbf {

class ExampleWidth {
 public:
  /// Throws InvalidArgument unless s is finite and > 0.
  explicit ExampleWidth(double s);
  double s() const noexcept { return s_; }

 private:
  double s_;
};

/// I(eta; s) = int_0^inf d eta' eta' exp(-(eta' - eta)^2 / (2 s^2)) (e^{-eta'} - e^{-eta'/2} / 6),
/// evaluated in closed form with the Gaussian folded into erfcx so that no
/// intermediate overflows; values below 1e-300 in magnitude return 0.
double integral_I(double eta, ExampleWidth w);

/// hbar * f_0(0, alpha eta) = 162 / (35 pi^{3/2}) * I(eta; s)^2 / s.
double husimi_slice(double eta, ExampleWidth w);

struct CurrentOptions {
  std::size_t nodes = 400;   ///< initial Gauss-Legendre nodes on [-L s, 0]
  double truncation = 12.0;  ///< L
  double tolerance = 1e-9;   ///< allowed change under node or L doubling
  int max_refinements = 5;
};

/// J^(s) = J_0(0) m hbar / alpha^2
///       = -(18 / (35 pi)) [2 + 9 / (sqrt(pi) s) int_{-inf}^0 eta I(eta; s)^2 d eta].
///
/// Accepted once doubling the nodes and, separately, doubling L both change
/// the value by at most `tolerance`; the node count is doubled up to
/// `max_refinements` times before QuadratureNotConverged is thrown.
double scaled_effective_current(ExampleWidth w, const CurrentOptions& opts = {});

/// Root of J^ bracketed to `tol`, by bisection on [4, 8]. Without a sign
/// change there the window is widened once to [2, 10]; NoBracket after that.
double critical_width(double tol, const CurrentOptions& opts = {});

/// Rows (s, J^(s)) in input order, evaluated concurrently. Metadata records
/// the quadrature settings.
SweepResult example_sweep(std::span<const double> s_values, const CurrentOptions& opts = {});

/// CSV with header `s,J_scaled,converged`.
std::string example_sweep_csv(const SweepResult& sweep);

}  // namespace qbf
