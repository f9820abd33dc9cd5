#pragma once

// Foundational numerics: error functions, Gauss-Legendre rules, root
// bracketing and the largest eigenpair of a dense symmetric matrix.
// Everything here is pure and reentrant.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qbf {

/// Complementary error function, 2/sqrt(pi) * int_x^inf exp(-y^2) dy.
///
/// Rational Chebyshev approximations of W. J. Cody (Math. Comp. 1969),
/// three intervals |x| <= 0.46875, <= 4, > 4. Relative error is below
/// 1e-15 wherever the result exceeds 1e-300; returns 0 for x >= 26.543.
double erfc(double x);

/// Scaled complementary error function exp(x^2) * erfc(x).
///
/// Same approximations as erfc() without forming exp(-x^2), so it stays
/// finite and accurate for all x > 0 (sqrt(1/pi)/x beyond 6.71e7).
/// Overflows to +inf for x < -26.628, where exp(x^2) itself overflows.
double erfcx(double x);

/// 1 - sqrt(pi) z erfcx(z). For z >= 4 it comes straight from the rational
/// tail of the erfcx approximation, so the small difference (about 1/(2z^2))
/// keeps full relative accuracy.
double erfcx_deficit(double z);

/// erf(x) = 1 - erfc(x), evaluated without cancellation for small |x|.
double erf(double x);

/// exp(log_gauss) * erfcx(z) where the caller supplies both exponents,
/// log_gauss and log_gauss + z^2 (= log_combined), in closed form.
///
/// For z >= 0 this is exp(log_gauss) * erfcx(z); for z < 0 it switches to
/// exp(log_combined) * erfc(z), which avoids the overflow of erfcx.
double gauss_erfcx(double z, double log_gauss, double log_combined);

/// Neumaier-compensated accumulator. Sums are formed in call order.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

/// Nodes and weights of a quadrature rule on a finite interval.
///
/// Invariants (checked on construction): nodes strictly increasing and
/// inside (lo, hi), weights positive, same length.
class QuadratureGrid {
 public:
  QuadratureGrid(std::vector<double> nodes, std::vector<double> weights, double lo, double hi);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Sum of w_i f(x_i), compensated, in node order.
  template <class F>
  double integrate(F&& f) const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc.add(weights_[i] * f(nodes_[i]));
    return acc.value();
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double lo_;
  double hi_;
};

/// n-point Gauss-Legendre rule on [lo, hi]; exact for degree <= 2n - 1.
/// Throws InvalidArgument for n == 0 or lo >= hi.
QuadratureGrid gauss_legendre(std::size_t n, double lo, double hi);

/// Composite rule: `panels` equal subintervals of [lo, hi], each with an
/// n-point Gauss-Legendre rule.
QuadratureGrid composite_gauss_legendre(std::size_t n, std::size_t panels, double lo, double hi);

/// Bisection root finder. Requires f(lo) * f(hi) < 0 (else NoBracket) and
/// finite values of f (else NonFinite). Returns the midpoint of a final
/// bracket no wider than tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Dense real symmetric matrix, row-major.
///
/// Only generate() and set() write entries, and both write (i, j) and
/// (j, i) from one value, so symmetry is exact.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t order);

  /// Builds the matrix from one call of entry(i, j) per unordered pair i <= j.
  template <class F>
  static SymmetricMatrix generate(std::size_t order, F&& entry) {
    SymmetricMatrix m(order);
    for (std::size_t i = 0; i < order; ++i)
      for (std::size_t j = i; j < order; ++j) m.set(i, j, entry(i, j));
    return m;
  }

  std::size_t order() const noexcept { return order_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }
  void set(std::size_t i, std::size_t j, double value);
  std::span<const double> data() const noexcept { return data_; }

  /// Infinity norm (max absolute row sum); bounds the spectral norm.
  double norm() const;
  double trace() const;
  /// y = M x.
  std::vector<double> multiply(std::span<const double> x) const;
  /// x^T M x.
  double quadratic_form(std::span<const double> x) const;

 private:
  std::size_t order_;
  std::vector<double> data_;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  ///< unit 2-norm, largest-|entry| positive
  double residual = 0.0;       ///< ||M v - value v||_2
};

/// Algebraically largest eigenvalue and its eigenvector.
///
/// Householder tridiagonalization, Sturm-sequence bisection for the top
/// eigenvalue and inverse iteration for the vector. Never selects by
/// magnitude. Throws NonConvergence when the residual stays above
/// 1e-10 * norm() after 8 inverse-iteration sweeps, or on non-finite input.
EigenPair sym_eig_max(const SymmetricMatrix& m);

}  // namespace qbf
