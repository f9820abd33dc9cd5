#include <cmath>
#include <numbers>
#include <string>

#include "qbf/errors.hpp"
#include "qbf/specfun.hpp"

namespace qbf {

void CompensatedSum::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::fabs(sum_) >= std::fabs(value))
    correction_ += (sum_ - t) + value;
  else
    correction_ += (value - t) + sum_;
  sum_ = t;
}

QuadratureGrid::QuadratureGrid(std::vector<double> nodes, std::vector<double> weights, double lo,
                               double hi)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), lo_(lo), hi_(hi) {
  if (!(lo_ < hi_)) throw InvalidArgument("QuadratureGrid: require lo < hi");
  if (nodes_.empty() || nodes_.size() != weights_.size())
    throw InvalidArgument("QuadratureGrid: nodes and weights must be non-empty and of equal length");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > lo_ && nodes_[i] < hi_))
      throw InvalidArgument("QuadratureGrid: node " + std::to_string(i) + " outside (lo, hi)");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw InvalidArgument("QuadratureGrid: nodes not strictly increasing");
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw InvalidArgument("QuadratureGrid: weights must be positive");
  }
}

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
void legendre_eval(std::size_t n, double z, double& value, double& derivative) {
  double p0 = 1.0;
  double p1 = z;
  for (std::size_t j = 2; j <= n; ++j) {
    const double dj = static_cast<double>(j);
    const double p2 = ((2.0 * dj - 1.0) * z * p1 - (dj - 1.0) * p0) / dj;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  derivative = static_cast<double>(n) * (z * p1 - p0) / ((z - 1.0) * (z + 1.0));
}

// Roots of P_n on (-1, 1) in increasing order and their weights. Newton's
// method started from Tricomi's estimate, plus one polishing step once the
// update drops below 1e-14.
void legendre_rule(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double dn = static_cast<double>(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t k = 1; k <= half; ++k) {
    const double theta = std::numbers::pi * (static_cast<double>(k) - 0.25) / (dn + 0.5);
    double z = std::cos(theta) * (1.0 - (1.0 - 1.0 / dn) / (8.0 * dn * dn));
    if (n % 2 == 1 && k == half) z = 0.0;  // exact middle node
    double value = 0.0;
    double dp = 0.0;
    bool polish = false;
    for (int iter = 0; iter < 100; ++iter) {
      legendre_eval(n, z, value, dp);
      const double step = value / dp;
      z -= step;
      if (polish) break;
      if (std::fabs(step) < 1e-14) polish = true;
    }
    if (n % 2 == 1 && k == half) z = 0.0;
    legendre_eval(n, z, value, dp);
    const double weight = 2.0 / ((1.0 - z) * (1.0 + z) * dp * dp);
    // k-th root counted from +1; store the mirrored pair in increasing order.
    x[n - k] = z;
    x[k - 1] = -z;
    w[n - k] = weight;
    w[k - 1] = weight;
  }
}

}  // namespace

QuadratureGrid gauss_legendre(std::size_t n, double lo, double hi) {
  if (n == 0) throw InvalidArgument("gauss_legendre: n must be >= 1");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidArgument("gauss_legendre: require finite lo < hi");
  std::vector<double> x;
  std::vector<double> w;
  legendre_rule(n, x, w);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
  return QuadratureGrid(std::move(x), std::move(w), lo, hi);
}

QuadratureGrid composite_gauss_legendre(std::size_t n, std::size_t panels, double lo, double hi) {
  if (panels == 0) throw InvalidArgument("composite_gauss_legendre: panels must be >= 1");
  if (n == 0) throw InvalidArgument("composite_gauss_legendre: n must be >= 1");
  if (!(lo < hi)) throw InvalidArgument("composite_gauss_legendre: require lo < hi");
  std::vector<double> x;
  std::vector<double> w;
  legendre_rule(n, x, w);
  std::vector<double> nodes;
  std::vector<double> weights;
  nodes.reserve(n * panels);
  weights.reserve(n * panels);
  const double width = (hi - lo) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = lo + width * static_cast<double>(k);
    const double mid = a + 0.5 * width;
    for (std::size_t i = 0; i < n; ++i) {
      nodes.push_back(mid + 0.5 * width * x[i]);
      weights.push_back(0.5 * width * w[i]);
    }
  }
  return QuadratureGrid(std::move(nodes), std::move(weights), lo, hi);
}

}  // namespace qbf
