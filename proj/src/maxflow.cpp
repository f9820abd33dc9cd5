#include "qbf/maxflow.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbf/csv.hpp"
#include "qbf/errors.hpp"
#include "qbf/parallel.hpp"

namespace qbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSinTaylorBand = 1e-8;
constexpr std::size_t kTauRuleNodes = 41;

// sin(t) / t.
double sinc(double t) {
  if (std::fabs(t) < kSinTaylorBand) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

void check_quadrant(double u, double v) {
  if (!(u >= 0.0) || !(v >= 0.0) || !std::isfinite(u) || !std::isfinite(v))
    throw InvalidArgument("kernel arguments must be finite and >= 0");
}

}  // namespace

MaxflowWidth::MaxflowWidth(double varsigma) : varsigma_(varsigma) {
  if (!std::isfinite(varsigma) || !(varsigma >= 0.0))
    throw InvalidArgument("varsigma must be finite and >= 0");
}

double u_correction(double u, double v, MaxflowWidth w) {
  check_quadrant(u, v);
  const double s = w.value();
  if (s == 0.0) return 0.0;
  const double gauss = std::exp(-2.0 * (u * u + v * v) / (s * s));
  if (gauss == 0.0) return 0.0;
  return -s / (2.0 * std::sqrt(kPi)) * gauss * erfcx_deficit((u + v) / s);
}

double kernel_entry(double u, double v, MaxflowWidth w) {
  const double correction = u_correction(u, v, w);
  const double theta = (u - v) * (u + v);
  return -(u + v - correction) * sinc(theta) / kPi;
}

DiscretizedKernel assemble(const QuadratureGrid& grid, MaxflowWidth w, bool negate) {
  if (grid.lo() != 0.0) throw InvalidArgument("assemble: grid must start at u = 0");
  const std::size_t n = grid.size();
  SymmetricMatrix m(n);
  const double sign = negate ? -1.0 : 1.0;
  std::vector<double> root_w(n);
  for (std::size_t i = 0; i < n; ++i) root_w[i] = std::sqrt(grid.weight(i));
  // Each task owns row i for j >= i, so no two tasks touch the same entry.
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j)
      m.set(i, j, sign * root_w[i] * root_w[j] * kernel_entry(grid.node(i), grid.node(j), w));
  });
  return DiscretizedKernel{grid, w, std::move(m)};
}

TruncatedSolution solve_truncated(MaxflowWidth w, std::size_t nodes, double u_max, bool negate) {
  const QuadratureGrid grid = gauss_legendre(nodes, 0.0, u_max);
  const DiscretizedKernel kernel = assemble(grid, w, negate);
  const EigenPair pair = sym_eig_max(kernel.matrix);
  std::vector<double> phi(nodes);
  for (std::size_t i = 0; i < nodes; ++i) phi[i] = pair.vector[i] / std::sqrt(grid.weight(i));
  return TruncatedSolution{grid, pair.value, std::move(phi), pair.residual, kernel.matrix.norm()};
}

double extrapolate_tail(double u_max, double value, double u_partner, double value_partner) {
  if (!(u_max != u_partner)) throw InvalidArgument("extrapolate_tail: truncations must differ");
  return (u_max * value - u_partner * value_partner) / (u_max - u_partner);
}

EigenResult max_backflow(MaxflowWidth w, const MaxflowOptions& opts) {
  if (opts.nodes < 50) throw InvalidArgument("max_backflow: nodes must be >= 50");
  if (!std::isfinite(opts.u_max) || opts.u_max < 4.0)
    throw InvalidArgument("max_backflow: u_max must be >= 4");
  if (!(opts.tail_ratio > 0.0 && opts.tail_ratio < 1.0))
    throw InvalidArgument("max_backflow: tail_ratio must lie in (0, 1)");

  EigenResult out{0.0, solve_truncated(w, opts.nodes, opts.u_max, opts.negate_kernel), std::nullopt,
                  std::nullopt, false};
  out.delta_max = out.primary.eigenvalue;
  if (opts.extrapolate_tail) {
    // Same node density per unit u^2 on the shorter interval.
    const double ratio = opts.tail_ratio;
    const auto partner_nodes = static_cast<std::size_t>(
        std::max(50.0, std::round(static_cast<double>(opts.nodes) * ratio * ratio)));
    const double partner_umax = ratio * opts.u_max;
    out.partner = solve_truncated(w, partner_nodes, partner_umax, opts.negate_kernel);
    out.delta_max =
        extrapolate_tail(opts.u_max, out.primary.eigenvalue, partner_umax, out.partner->eigenvalue);
  }
  if (opts.check_resolution) {
    const TruncatedSolution fine = solve_truncated(w, 2 * opts.nodes, opts.u_max, opts.negate_kernel);
    out.resolution_shift = std::fabs(fine.eigenvalue - out.primary.eigenvalue);
    out.resolution_warning = *out.resolution_shift > 1e-4;
  }
  return out;
}

SweepResult varsigma_sweep(std::span<const double> values, const MaxflowOptions& opts) {
  require_increasing(values, "varsigma_sweep");
  for (double v : values) (void)MaxflowWidth(v);
  const std::vector<EigenResult> results = parallel_map<EigenResult>(
      values.size(), [&](std::size_t i) { return max_backflow(MaxflowWidth(values[i]), opts); });

  SweepResult out;
  out.diagnostic_names = {"varsigma_sq", "ln_delta_max", "nodes", "umax", "residual"};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const EigenResult& r = results[i];
    const double v = values[i];
    const double ln = r.delta_max > 0.0 ? std::log(r.delta_max) : std::nan("");
    out.rows.push_back({v, r.delta_max, true,
                        {v * v, ln, static_cast<double>(opts.nodes), opts.u_max, r.primary.residual}});
  }
  out.metadata = {{"nodes", std::to_string(opts.nodes)},
                  {"umax", format_real(opts.u_max)},
                  {"extrapolate_tail", opts.extrapolate_tail ? "true" : "false"},
                  {"tail_ratio", format_real(opts.tail_ratio)}};
  return out;
}

std::string varsigma_sweep_csv(const SweepResult& sweep) {
  std::string text = "varsigma,delta_max,varsigma_sq,ln_delta_max,nodes,umax,residual\n";
  for (const auto& row : sweep.rows) {
    const auto& d = row.diagnostics;
    text += csv_line({format_real(row.parameter), format_real(row.value), format_real(d.at(0)),
                      format_real(d.at(1)), std::to_string(static_cast<long long>(d.at(2))),
                      format_real(d.at(3)), format_real(d.at(4))}) +
            '\n';
  }
  return text;
}

std::string eigenvector_csv(const TruncatedSolution& solution) {
  std::string text = "u,weight,phi\n";
  for (std::size_t i = 0; i < solution.phi.size(); ++i)
    text += csv_line({format_real(solution.grid.node(i)), format_real(solution.grid.weight(i)),
                      format_real(solution.phi[i])}) +
            '\n';
  return text;
}

TimeResolvedCurrent::TimeResolvedCurrent(const QuadratureGrid& grid, std::span<const double> phi,
                                         MaxflowWidth w)
    : u_(grid.nodes().begin(), grid.nodes().end()), a_(grid.size()), u_max_(grid.hi()) {
  const std::size_t n = grid.size();
  if (phi.size() != n) throw InvalidArgument("time_resolved_current: phi length differs from grid");
  CompensatedSum norm;
  for (std::size_t i = 0; i < n; ++i) {
    a_[i] = grid.weight(i) * phi[i];
    norm.add(grid.weight(i) * phi[i] * phi[i]);
  }
  if (std::fabs(norm.value() - 1.0) > 1e-8)
    throw InvalidArgument("time_resolved_current: phi must have unit weighted norm");
  m_.resize(n * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      const double value = u_[i] + u_[j] - u_correction(u_[i], u_[j], w);
      m_[i * n + j] = value;
      m_[j * n + i] = value;
    }
  });
}

double TimeResolvedCurrent::operator()(double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("tau must lie in [0, 1]");
  const std::size_t n = u_.size();
  const double c = 2.0 * tau - 1.0;
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = c * u_[i] * u_[i];
    x[i] = a_[i] * std::cos(phase);
    y[i] = a_[i] * std::sin(phase);
  }
  // Re[z^T M z*] with z = x + i y, and the imaginary part that must cancel.
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum scale;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m_.data() + i * n;
    double mx = 0.0;
    double my = 0.0;
    double mabs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      mx += row[j] * x[j];
      my += row[j] * y[j];
      mabs += std::fabs(row[j] * a_[j]);
    }
    re.add(x[i] * mx + y[i] * my);
    im.add(y[i] * mx - x[i] * my);
    scale.add(std::fabs(a_[i]) * mabs);
  }
  if (std::fabs(im.value()) > 1e-12 * scale.value()) {
    std::ostringstream msg;
    msg << "imaginary part " << im.value() << " at tau = " << tau << " does not cancel";
    throw NumericalError("time_resolved_current", msg.str());
  }
  return re.value() / kPi;
}

double TimeResolvedCurrent::transfer() const {
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(u_max_ * u_max_ / 36.0)));
  const QuadratureGrid rule = composite_gauss_legendre(kTauRuleNodes, panels, 0.0, 1.0);
  return -rule.integrate([&](double tau) { return (*this)(tau); });
}

double time_resolved_current(const QuadratureGrid& grid, std::span<const double> phi,
                             MaxflowWidth w, double tau) {
  return TimeResolvedCurrent(grid, phi, w)(tau);
}

Feasibility feasibility(const ApparatusSpec& a) {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
      throw InvalidArgument(std::string(name) + " must be finite and > 0");
  };
  check(a.mass, "mass");
  check(a.sigma_tilde, "sigma_tilde");
  check(a.duration, "duration");
  check(a.hbar, "hbar");
  const double varsigma = a.sigma_tilde * std::sqrt(a.duration / (a.mass * a.hbar));
  return {varsigma, a.duration <= a.mass * a.hbar / (a.sigma_tilde * a.sigma_tilde)};
}

}  // namespace qbf
