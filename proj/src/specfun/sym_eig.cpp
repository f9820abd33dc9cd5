#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "qbf/errors.hpp"
#include "qbf/specfun.hpp"

namespace qbf {

SymmetricMatrix::SymmetricMatrix(std::size_t order) : order_(order), data_(order * order, 0.0) {
  if (order == 0) throw InvalidArgument("SymmetricMatrix: order must be positive");
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  data_[i * order_ + j] = value;
  data_[j * order_ + i] = value;
}

double SymmetricMatrix::norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < order_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < order_; ++j) row += std::fabs(data_[i * order_ + j]);
    best = std::max(best, row);
  }
  return best;
}

double SymmetricMatrix::trace() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < order_; ++i) acc.add(data_[i * order_ + i]);
  return acc.value();
}

std::vector<double> SymmetricMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(order_, 0.0);
  for (std::size_t i = 0; i < order_; ++i) {
    const double* row = data_.data() + i * order_;
    double acc = 0.0;
    for (std::size_t j = 0; j < order_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

double SymmetricMatrix::quadratic_form(std::span<const double> x) const {
  const std::vector<double> y = multiply(x);
  CompensatedSum acc;
  for (std::size_t i = 0; i < order_; ++i) acc.add(x[i] * y[i]);
  return acc.value();
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kInverseIterationCap = 8;

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i + 1
};

// Number of eigenvalues of T strictly below x (Sturm sequence count).
std::size_t count_below(const Tridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::fabs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double largest_eigenvalue(const Tridiagonal& t, double pivmin) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::fabs(t.off[i - 1]);
    if (i + 1 < n) radius += std::fabs(t.off[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  const double pad = 2.0 * kEps * std::max(std::fabs(lo), std::fabs(hi)) + pivmin;
  lo -= pad;
  hi += pad;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * kEps * std::max(std::fabs(lo), std::fabs(hi)) + pivmin) break;
    if (count_below(t, mid, pivmin) == n)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (T - shift I) y = b in place by Gaussian elimination with partial
// pivoting; exact zero pivots are replaced by `pivmin`.
void shifted_solve(const Tridiagonal& t, double shift, double pivmin, std::vector<double>& b) {
  const std::size_t n = t.diag.size();
  std::vector<double> dl(t.off);
  std::vector<double> du(t.off);
  std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<double> dm(n);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) dm[i] = t.diag[i] - shift;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(dm[i]) >= std::fabs(dl[i])) {
      if (dm[i] == 0.0) dm[i] = pivmin;
      const double fact = dl[i] / dm[i];
      dl[i] = fact;
      dm[i + 1] -= fact * du[i];
    } else {
      const double fact = dm[i] / dl[i];
      dm[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = dm[i + 1];
      dm[i + 1] = temp - fact * dm[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (dm[n - 1] == 0.0) dm[n - 1] = pivmin;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!swapped[i]) {
      b[i + 1] -= dl[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl[i] * b[i];
    }
  }
  b[n - 1] /= dm[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dm[n - 2];
  for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;)
    b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / dm[k];
}

double normalize(std::vector<double>& v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return 0.0;
  CompensatedSum acc;
  for (double& x : v) {
    x /= scale;
    acc.add(x * x);
  }
  const double len = std::sqrt(acc.value());
  for (double& x : v) x /= len;
  return len * scale;
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
  if (v[arg] < 0.0)
    for (double& x : v) x = -x;
}

double residual_norm(const SymmetricMatrix& m, std::span<const double> v, double value) {
  const std::vector<double> mv = m.multiply(v);
  CompensatedSum acc;
  for (std::size_t i = 0; i < mv.size(); ++i) {
    const double r = mv[i] - value * v[i];
    acc.add(r * r);
  }
  return std::sqrt(acc.value());
}

}  // namespace

EigenPair sym_eig_max(const SymmetricMatrix& m) {
  const std::size_t n = m.order();
  for (double x : m.data())
    if (!std::isfinite(x)) throw NonConvergence("matrix has non-finite entries");

  EigenPair out;
  if (n == 1) {
    out.value = m(0, 0);
    out.vector = {1.0};
    out.residual = 0.0;
    return out;
  }

  const double mnorm = m.norm();
  const double tolerance = 1e-10 * mnorm;

  Eigen::MatrixXd dense(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(dense);

  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  double off_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = tri.diagonal()(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.off[i] = tri.subDiagonal()(static_cast<Eigen::Index>(i));
    off_max = std::max(off_max, std::fabs(t.off[i]));
  }
  const double pivmin = std::max(kEps * std::max(mnorm, off_max), std::numeric_limits<double>::min());

  const double shift = largest_eigenvalue(t, pivmin);

  std::vector<double> y(n, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  std::vector<double> vec(n);
  double value = shift;
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kInverseIterationCap; ++iter) {
    shifted_solve(t, shift, pivmin, y);
    if (normalize(y) == 0.0) throw NonConvergence("inverse iteration produced a zero vector");
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = y[i];
    v = tri.matrixQ() * v;
    for (std::size_t i = 0; i < n; ++i) vec[i] = v(static_cast<Eigen::Index>(i));
    normalize(vec);
    value = m.quadratic_form(vec);
    residual = residual_norm(m, vec, value);
    if (residual <= tolerance) break;
  }
  if (!(residual <= tolerance))
    throw NonConvergence("residual " + std::to_string(residual) + " above " +
                         std::to_string(tolerance) + " after " +
                         std::to_string(kInverseIterationCap) + " inverse-iteration sweeps");

  fix_sign(vec);
  out.value = value;
  out.vector = std::move(vec);
  out.residual = residual;
  return out;
}

}  // namespace qbf
