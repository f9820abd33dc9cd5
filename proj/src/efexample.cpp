#include "qbf/efexample.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbf/csv.hpp"
#include "qbf/errors.hpp"
#include "qbf/parallel.hpp"
#include "qbf/specfun.hpp"

namespace qbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = 1e-300;

double current_at(double s, std::size_t nodes, double truncation) {
  const ExampleWidth w(s);
  const QuadratureGrid grid = gauss_legendre(nodes, -truncation * s, 0.0);
  const double moment = grid.integrate([&](double eta) {
    const double i = integral_I(eta, w);
    return eta * i * i;
  });
  return -(18.0 / (35.0 * kPi)) * (2.0 + 9.0 / (std::sqrt(kPi) * s) * moment);
}

}  // namespace

ExampleWidth::ExampleWidth(double s) : s_(s) {
  if (!std::isfinite(s) || !(s > 0.0)) throw InvalidArgument("width s must be finite and > 0");
}

double integral_I(double eta, ExampleWidth w) {
  if (!std::isfinite(eta)) throw InvalidArgument("integral_I: eta must be finite");
  const double s = w.s();
  const double s2 = s * s;
  const double root_half_pi = std::sqrt(0.5 * kPi);
  const double gauss = -eta * eta / (2.0 * s2);

  const double a = s2 - eta;
  const double z1 = a / (std::sqrt(2.0) * s);
  const double e1 = gauss_erfcx(z1, gauss, 0.5 * s2 - eta);
  const double b = s2 - 2.0 * eta;
  const double z2 = b / (2.0 * std::sqrt(2.0) * s);
  const double e2 = gauss_erfcx(z2, gauss, 0.125 * s2 - 0.5 * eta);

  const double first = 5.0 * s / 6.0 * std::exp(gauss);
  const double second = root_half_pi * a * e1;
  const double third = root_half_pi * b / 12.0 * e2;
  if (std::fabs(first) < kTiny && std::fabs(second) < kTiny && std::fabs(third) < kTiny) return 0.0;
  return s * (first - second + third);
}

double husimi_slice(double eta, ExampleWidth w) {
  const double i = integral_I(eta, w);
  return 162.0 / (35.0 * std::pow(kPi, 1.5)) * i * i / w.s();
}

double scaled_effective_current(ExampleWidth w, const CurrentOptions& opts) {
  if (opts.nodes == 0 || !(opts.truncation > 0.0) || !(opts.tolerance > 0.0))
    throw InvalidArgument("scaled_effective_current: invalid quadrature options");
  const double s = w.s();
  std::size_t nodes = opts.nodes;
  double base = current_at(s, nodes, opts.truncation);
  for (int r = 0; r <= opts.max_refinements; ++r) {
    const double finer = current_at(s, 2 * nodes, opts.truncation);
    const double longer = current_at(s, 2 * nodes, 2.0 * opts.truncation);
    if (std::fabs(finer - base) <= opts.tolerance && std::fabs(longer - finer) <= opts.tolerance)
      return finer;
    nodes *= 2;
    base = finer;
  }
  std::ostringstream msg;
  msg << "J(s = " << s << ") not stable to " << opts.tolerance << " up to " << nodes << " nodes";
  throw QuadratureNotConverged("scaled_effective_current", msg.str());
}

double critical_width(double tol, const CurrentOptions& opts) {
  if (!(tol > 0.0)) throw InvalidArgument("critical_width: tol must be > 0");
  auto f = [&](double s) { return scaled_effective_current(ExampleWidth(s), opts); };
  try {
    return bisect(f, 4.0, 8.0, tol);
  } catch (const NoBracket&) {
    return bisect(f, 2.0, 10.0, tol);
  }
}

SweepResult example_sweep(std::span<const double> s_values, const CurrentOptions& opts) {
  require_increasing(s_values, "example_sweep");
  for (double s : s_values) (void)ExampleWidth(s);
  const std::vector<double> values = parallel_map<double>(
      s_values.size(), [&](std::size_t i) { return scaled_effective_current(ExampleWidth(s_values[i]), opts); });
  SweepResult out;
  for (std::size_t i = 0; i < values.size(); ++i) out.rows.push_back({s_values[i], values[i], true, {}});
  out.metadata = {{"nodes", std::to_string(opts.nodes)},
                  {"truncation", format_real(opts.truncation)},
                  {"tolerance", format_real(opts.tolerance)}};
  return out;
}

std::string example_sweep_csv(const SweepResult& sweep) {
  std::string text = "s,J_scaled,converged\n";
  for (const auto& row : sweep.rows)
    text += csv_line({format_real(row.parameter), format_real(row.value), row.converged ? "1" : "0"}) + '\n';
  return text;
}

}  // namespace qbf
