#pragma once

// Positive-momentum free-particle states, the Gaussian precision function,
// the Wigner-Moyal transform, the Husimi distribution and the standard
// probability current at the origin.
//
// Conventions: g~(p) = (2 pi hbar)^{-1/2} int dx e^{-ipx/hbar} g(x), and a
// state evolves as psi~_t(p) = exp(-i p^2 t / (2 m hbar)) psi~_0(p).

#include <complex>
#include <iosfwd>
#include <vector>

#include "qbf/specfun.hpp"

namespace qbf {

using complex = std::complex<double>;

struct PhysicalScales {
  double hbar = 1.0;
  double mass = 1.0;
  double alpha = 1.0;    ///< momentum scale of the example state
  double horizon = 1.0;  ///< duration T of the observation window

  /// Throws InvalidArgument unless every field is finite and > 0.
  void validate() const;
};

/// Gaussian precision function with momentum width sigma_tilde and position
/// width sigma = hbar / sigma_tilde; both representations have unit norm.
class PrecisionSpec {
 public:
  explicit PrecisionSpec(double sigma_tilde, double hbar = 1.0);

  double sigma_tilde() const noexcept { return sigma_tilde_; }
  double sigma() const noexcept { return hbar_ / sigma_tilde_; }
  double hbar() const noexcept { return hbar_; }

  /// chi~(p) = pi^{-1/4} sigma_tilde^{-1/2} exp(-p^2 / (2 sigma_tilde^2)).
  double momentum_amplitude(double p) const;
  /// chi(x) = pi^{-1/4} sigma^{-1/2} exp(-x^2 / (2 sigma^2)).
  double position_amplitude(double x) const;

 private:
  double sigma_tilde_;
  double hbar_;
};

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

/// Example amplitude in units alpha^{-1/2} as a function of eta = p / alpha:
/// (18 eta / sqrt 35)(e^{-eta} - e^{-eta/2} / 6) for eta >= 0, else 0.
double bm_momentum_amplitude(double eta);

/// Position representation of the example at t = 0 in units (alpha/hbar)^{1/2},
/// xi = alpha x / hbar: 18 (70 pi)^{-1/2} [(1 - i xi)^{-2} - (2/3)(1 - 2i xi)^{-2}].
complex bm_position_amplitude(double xi);

/// A wave function at time t whose momentum amplitude vanishes for p < 0.
///
/// Two kinds exist. The analytic example state is evaluated anywhere and
/// carries a default nodal grid on [0, momentum_cutoff()]. A sampled state
/// is known only at the nodes of its grid; every operation consumes nodal
/// values, and amplitude() rejects non-nodal p >= 0.
class MomentumState {
 public:
  enum class Kind { bm_example, sampled };

  /// Default momentum cutoff of the example state, in units of alpha.
  static constexpr double kExampleCutoff = 80.0;

  static MomentumState bm_example(const PhysicalScales& scales = {});

  /// Sampled state on a grid with lo >= 0. The amplitudes are t = 0 values
  /// and must have norm sum w |a|^2 within 1e-8 of 1.
  static MomentumState sampled(QuadratureGrid grid, std::vector<complex> amplitudes,
                               const PhysicalScales& scales = {});

  Kind kind() const noexcept { return kind_; }
  double time() const noexcept { return time_; }
  const PhysicalScales& scales() const noexcept { return scales_; }
  double momentum_cutoff() const noexcept { return grid_.hi(); }

  /// Same state at time t (the stored t = 0 data are shared unchanged).
  MomentumState at_time(double t) const;

  /// psi~_t(p); exactly 0 for p < 0.
  complex amplitude(double p) const;

  /// Quadrature grid on which nodal_amplitudes() are given.
  const QuadratureGrid& grid() const noexcept { return grid_; }
  /// psi~_t at the grid nodes.
  std::vector<complex> nodal_amplitudes() const;
  /// Example state only: the nodal representation with `refine` times as
  /// many panels as the default grid.
  MomentumState refined(std::size_t refine) const;

  /// sum_i w_i |psi~(p_i)|^2.
  double norm() const;

 private:
  MomentumState(Kind kind, QuadratureGrid grid, std::vector<complex> amplitudes,
                const PhysicalScales& scales);

  complex phase(double p) const;

  Kind kind_;
  QuadratureGrid grid_;
  std::vector<complex> amplitudes_;  // t = 0 nodal values
  PhysicalScales scales_;
  double time_ = 0.0;
};

/// Wigner-Moyal transform in its momentum form,
///   W(x, p) = (2 pi hbar)^{-1/2} int_0^inf dq e^{i x (q - p/2)/hbar} chi~(q - p) psi~_t(q).
///
/// The example state is integrated adaptively on the window where chi~(q - p)
/// exceeds e^{-72} relative to its peak, doubling panels until successive
/// values agree to 1e-9 relative, or to the rounding floor
/// 1e-15 (1 + max phase) sum |w f| when W is tiny against its integrand
/// (QuadratureNotConverged after 10 doublings). A sampled state is summed
/// over its own nodes.
complex wigner_moyal(const MomentumState& state, const PrecisionSpec& prec, PhasePoint pt);

/// The same momentum-form sum on arbitrary nodal data; the nodes may extend
/// to negative momenta. Used by sampled states and by tests.
complex wigner_moyal_nodal(const QuadratureGrid& grid, const std::vector<complex>& amplitudes,
                           const PrecisionSpec& prec, PhasePoint pt);

/// Position form of the same transform,
///   W(x, p) = (2 pi hbar)^{-1/2} int dy e^{-ipy/hbar} chi(y - x/2) psi_t(y + x/2),
/// available for the example state at t = 0 only (InvalidArgument otherwise).
complex wigner_moyal_position(const MomentumState& state, const PrecisionSpec& prec, PhasePoint pt);

/// Husimi distribution f_t(x, p) = |W(x, p)|^2.
double husimi(const MomentumState& state, const PrecisionSpec& prec, PhasePoint pt);

/// Order of the two nested momentum loops in standard_current_zero().
enum class LoopOrder { p_outer, p_prime_outer };

/// Probability current at x = 0 after evolving the state's t = 0 data to time t,
///   j_t(0) = (4 pi hbar m)^{-1} int int dp dp' psi~_t(p)* psi~_t(p') (p + p'),
/// as a double sum over the state's nodes. The imaginary part, zero in exact
/// arithmetic, must stay below 1e-12 of the absolute sum. For the example state
/// the panels are doubled until two successive sums agree to 1e-9, at most
/// up to 16 times the default grid (QuadratureNotConverged otherwise).
double standard_current_zero(const MomentumState& state, double t,
                             LoopOrder order = LoopOrder::p_outer);

/// Reads a sampled state from CSV with header `p,re,im`. The nodes must match
/// `declared` to 1e-12 relative; a norm in [0.99, 1.01] is rescaled to 1,
/// anything else is rejected with InvalidArgument.
MomentumState load_sampled_state(std::istream& in, const QuadratureGrid& declared,
                                 const PhysicalScales& scales = {});

/// Writes the t = 0 nodal amplitudes as CSV with header `p,re,im`.
void save_sampled_state(std::ostream& out, const MomentumState& state);

}  // namespace qbf
