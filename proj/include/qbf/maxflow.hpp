#pragma once

// Maximal backflow under the effective-current criterion.
//
// In the variables u = p sqrt(T / (4 m hbar)) and varsigma = sigma_tilde
// sqrt(T / (m hbar)) the transfer is the top eigenvalue of
//   int_0^inf dv K(u, v; varsigma) phi(v) = lambda phi(u),
//   K = -[u + v - U(u, v; varsigma)] sin(u^2 - v^2) / (pi (u^2 - v^2)),
// where U is the negative-momentum Husimi correction (U = 0 at varsigma = 0,
// which gives the free-particle bound).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbf/specfun.hpp"
#include "qbf/sweep.hpp"

namespace qbf {

class MaxflowWidth {
 public:
  /// Throws InvalidArgument unless varsigma is finite and >= 0.
  explicit MaxflowWidth(double varsigma);
  double value() const noexcept { return varsigma_; }

 private:
  double varsigma_;
};

/// U(u, v; s) = ((u + v)/2) e^{-(u - v)^2/s^2} erfc((u + v)/s) - (s / (2 sqrt pi)) e^{-2(u^2 + v^2)/s^2},
/// evaluated as -(s / (2 sqrt pi)) e^{-2(u^2 + v^2)/s^2} * (1 - sqrt(pi) z erfcx(z)) with
/// z = (u + v)/s, which is never positive. Exactly 0 for s = 0.
double u_correction(double u, double v, MaxflowWidth w);

/// K(u, v; s) with the diagonal limit -(2u - U(u, u; s)) / pi; for
/// |u^2 - v^2| < 1e-8 the ratio sin(t)/t is replaced by 1 - t^2/6.
double kernel_entry(double u, double v, MaxflowWidth w);

struct DiscretizedKernel {
  QuadratureGrid grid;
  MaxflowWidth width;
  SymmetricMatrix matrix;  ///< A_ij = sqrt(w_i w_j) K(u_i, u_j)
};

/// Symmetric Nystrom matrix on `grid` (which must start at 0). `negate`
/// flips the sign of every entry; it exists only to let tests confirm that
/// the checks notice a wrong kernel.
DiscretizedKernel assemble(const QuadratureGrid& grid, MaxflowWidth w, bool negate = false);

struct MaxflowOptions {
  std::size_t nodes = 800;
  double u_max = 12.0;
  /// Combine with a second solve on [0, tail_ratio * u_max] to remove the
  /// leading 1/u_max truncation error.
  bool extrapolate_tail = true;
  double tail_ratio = 0.75;
  /// Repeat the primary solve with twice the nodes and report the shift.
  bool check_resolution = false;
  bool negate_kernel = false;
};

/// One eigen-solve on a truncated Gauss-Legendre grid.
struct TruncatedSolution {
  QuadratureGrid grid;
  double eigenvalue = 0.0;
  /// Eigenfunction on the nodes with sum_i w_i phi_i^2 = 1.
  std::vector<double> phi;
  double residual = 0.0;     ///< ||A v - lambda v||_2 of the symmetrized problem
  double matrix_norm = 0.0;  ///< infinity norm of A
};

struct EigenResult {
  /// Reported transfer: the tail-extrapolated eigenvalue, or the raw
  /// primary eigenvalue when extrapolation is off.
  double delta_max = 0.0;
  TruncatedSolution primary;
  std::optional<TruncatedSolution> partner;
  /// |lambda(2 nodes) - lambda(nodes)| when a resolution check was requested.
  std::optional<double> resolution_shift;
  bool resolution_warning = false;  ///< shift above 1e-4
};

/// Largest eigenvalue on a single grid of `nodes` Gauss-Legendre points on
/// [0, u_max]; the public entry point is max_backflow().
TruncatedSolution solve_truncated(MaxflowWidth w, std::size_t nodes, double u_max,
                                  bool negate = false);

/// Two-grid elimination of a c/U truncation term:
/// (U lambda(U) - U' lambda(U')) / (U - U').
double extrapolate_tail(double u_max, double value, double u_partner, double value_partner);

/// Requires nodes >= 50 and u_max >= 4 (InvalidArgument otherwise).
EigenResult max_backflow(MaxflowWidth w, const MaxflowOptions& opts = {});

/// Rows (varsigma, delta_max) in input order with diagnostics
/// varsigma_sq, ln_delta_max, nodes, umax, residual; solves run concurrently.
SweepResult varsigma_sweep(std::span<const double> values, const MaxflowOptions& opts = {});

/// CSV with header `varsigma,delta_max,varsigma_sq,ln_delta_max,nodes,umax,residual`.
std::string varsigma_sweep_csv(const SweepResult& sweep);

/// CSV with header `u,weight,phi`.
std::string eigenvector_csv(const TruncatedSolution& solution);

/// j(tau) = T J_t(0) at t = tau T for the state with eigenfunction phi:
///   j(tau) = (1/pi) sum_ij w_i w_j phi_i phi_j (u_i + u_j - U_ij) cos((2 tau - 1)(u_i^2 - u_j^2)).
/// The matrix of (u_i + u_j - U_ij) is built once; each evaluation is O(n^2).
class TimeResolvedCurrent {
 public:
  /// phi must have weighted norm 1 within 1e-8 (InvalidArgument otherwise).
  TimeResolvedCurrent(const QuadratureGrid& grid, std::span<const double> phi, MaxflowWidth w);

  /// tau in [0, 1]. Throws NumericalError if the imaginary part, which
  /// cancels by symmetry, exceeds 1e-12 of the absolute scale.
  double operator()(double tau) const;

  /// -int_0^1 j(tau) d tau on a composite 41-point rule with
  /// ceil(u_max^2 / 36) panels, enough to resolve phases up to u_max^2.
  double transfer() const;

 private:
  std::vector<double> u_;
  std::vector<double> a_;  // w_i phi_i
  std::vector<double> m_;  // row-major u_i + u_j - U_ij
  double u_max_;
};

double time_resolved_current(const QuadratureGrid& grid, std::span<const double> phi,
                             MaxflowWidth w, double tau);

struct ApparatusSpec {
  double mass = 1.0;
  double sigma_tilde = 1.0;
  double duration = 1.0;
  double hbar = 1.0;
};

struct Feasibility {
  double varsigma = 0.0;
  bool feasible = false;  ///< T <= m hbar / sigma_tilde^2, i.e. varsigma <= 1
};

/// Throws InvalidArgument if any field is non-positive or non-finite.
Feasibility feasibility(const ApparatusSpec& a);

}  // namespace qbf
