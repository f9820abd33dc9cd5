#include "qbf/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>

#include "qbf/efexample.hpp"
#include "qbf/errors.hpp"
#include "qbf/maxflow.hpp"
#include "qbf/specfun.hpp"
#include "qbf/states.hpp"

namespace qbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBracketConstant = 36.0 / (35.0 * kPi);
constexpr double kFreeBound = 0.0384517;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// Deterministic points in [lo, hi) from a fixed linear congruential sequence.
class Points {
 public:
  explicit Points(std::uint64_t seed) : state_(seed) {}
  double next(double lo, double hi) {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    const double unit = static_cast<double>(state_ >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

 private:
  std::uint64_t state_;
};

// Reduced-resolution settings for the maximal-backflow checks.
MaxflowOptions reduced(bool fault) {
  MaxflowOptions o;
  o.nodes = 300;
  o.u_max = 8.0;
  o.negate_kernel = fault;
  return o;
}

class Suite {
 public:
  void run(const std::string& name, const std::function<CheckResult()>& check) {
    try {
      CheckResult r = check();
      r.name = name;
      results_.push_back(std::move(r));
    } catch (const std::exception& e) {
      results_.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

CheckResult verdict(bool pass, std::string detail) { return {"", pass, std::move(detail)}; }

// Direct quadrature of the defining integral of I(eta; s).
double integral_I_direct(double eta, double s) {
  const double hi = std::max(eta, 0.0) + 14.0 * s + 80.0;
  const auto panels = static_cast<std::size_t>(std::ceil(hi / std::min(1.0, s)));
  const QuadratureGrid g = composite_gauss_legendre(20, panels, 0.0, hi);
  return g.integrate([&](double e) {
    const double d = (e - eta) / s;
    return e * std::exp(-0.5 * d * d) * (std::exp(-e) - std::exp(-0.5 * e) / 6.0);
  });
}

void specfun_checks(Suite& suite) {
  suite.run("specfun.erfc_reference", [] {
    const double err = rel_err(erfc(1.0), 0.15729920705028513066);
    return verdict(err <= 1e-14, "erfc(1) rel err " + num(err) + " <= 1e-14");
  });
  suite.run("specfun.erfc_monotone_range", [] {
    double prev = 2.0;
    bool ok = true;
    for (double x = -6.0; x <= 26.0; x += 0.01) {
      const double v = erfc(x);
      ok = ok && v <= prev && v >= 0.0 && v <= 2.0;
      prev = v;
    }
    return verdict(ok, "nonincreasing, inside [0, 2] on [-6, 26]");
  });
  suite.run("specfun.erfcx_identity", [] {
    double worst = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.05) worst = std::max(worst, rel_err(erfcx(x) * std::exp(-x * x), erfc(x)));
    const bool finite = std::isfinite(erfcx(1e4)) && erfcx(1e4) > 0.0;
    return verdict(worst <= 1e-13 && finite, "max rel err " + num(worst) + " <= 1e-13; erfcx(1e4) = " + num(erfcx(1e4)));
  });
  suite.run("specfun.gauss_legendre_exactness", [] {
    double worst = 0.0;
    for (std::size_t n : {1u, 2u, 5u, 16u, 40u}) {
      const QuadratureGrid g = gauss_legendre(n, -1.0, 1.0);
      for (std::size_t k = 0; k <= 2 * n - 1; ++k) {
        const double exact = k % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(k + 1);
        const double got = g.integrate([&](double x) { return std::pow(x, static_cast<double>(k)); });
        worst = std::max(worst, std::fabs(got - exact));
      }
    }
    return verdict(worst <= 1e-14, "max |error| " + num(worst) + " <= 1e-14");
  });
  suite.run("specfun.eig_shift_invariance", [] {
    Points pts(7);
    const std::size_t n = 40;
    std::vector<double> vals(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) vals[i * n + j] = vals[j * n + i] = pts.next(-1.0, 1.0);
    const auto m = SymmetricMatrix::generate(n, [&](std::size_t i, std::size_t j) { return vals[i * n + j]; });
    const double c = 3.5;
    const auto shifted = SymmetricMatrix::generate(
        n, [&](std::size_t i, std::size_t j) { return vals[i * n + j] + (i == j ? c : 0.0); });
    const EigenPair a = sym_eig_max(m);
    const EigenPair b = sym_eig_max(shifted);
    double dv = 0.0;
    for (std::size_t i = 0; i < n; ++i) dv = std::max(dv, std::fabs(a.vector[i] - b.vector[i]));
    const double dvalue = std::fabs(b.value - a.value - c);
    return verdict(dvalue <= 1e-12 && dv <= 1e-9,
                   "value shift error " + num(dvalue) + ", vector change " + num(dv));
  });
}

void states_checks(Suite& suite) {
  const MomentumState bm = MomentumState::bm_example();
  suite.run("states.example_norm", [&] {
    const double err = std::fabs(bm.norm() - 1.0);
    return verdict(err <= 1e-10, "|norm - 1| = " + num(err) + " <= 1e-10");
  });
  suite.run("states.positive_support", [&] {
    const bool ok = bm.amplitude(-1e-12) == 0.0 && bm.amplitude(-3.0) == 0.0 &&
                    bm.at_time(0.4).amplitude(-0.5) == 0.0 && bm_momentum_amplitude(0.0) == 0.0;
    return verdict(ok, "amplitude exactly 0 for p < 0");
  });
  suite.run("states.conjugate_symmetry", [] {
    double worst = 0.0;
    for (double xi = 0.0; xi <= 20.0; xi += 0.25)
      worst = std::max(worst, std::abs(bm_position_amplitude(-xi) - std::conj(bm_position_amplitude(xi))));
    return verdict(worst <= 1e-10, "max |psi(-x) - psi(x)*| = " + num(worst));
  });
  suite.run("states.time_invariant_density", [&] {
    const MomentumState later = bm.at_time(0.7);
    double worst = 0.0;
    for (double p = 0.0; p <= 20.0; p += 0.37)
      worst = std::max(worst, std::fabs(std::abs(later.amplitude(p)) - std::abs(bm.amplitude(p))));
    return verdict(worst <= 1e-15, "max ||psi_t| - |psi_0|| = " + num(worst));
  });
  suite.run("states.current_example", [&] {
    const double j = standard_current_zero(bm, 0.0);
    const double err = std::fabs(j + kBracketConstant);
    return verdict(err <= 1e-9, "j_0(0) = " + num(j) + ", |j + 36/(35 pi)| = " + num(err));
  });
  suite.run("states.current_cutoff_doubling", [&] {
    const double hi = 2.0 * MomentumState::kExampleCutoff;
    QuadratureGrid g = composite_gauss_legendre(20, 80, 0.0, hi);
    std::vector<complex> a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) a[i] = bm_momentum_amplitude(g.node(i));
    const MomentumState wide = MomentumState::sampled(std::move(g), std::move(a));
    const double d = std::fabs(standard_current_zero(wide, 0.0) - standard_current_zero(bm, 0.0));
    return verdict(d <= 1e-10, "cutoff doubling changes j by " + num(d) + " <= 1e-10");
  });
  suite.run("states.wigner_forms_agree", [&] {
    Points pts(11);
    const PrecisionSpec prec(1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const PhasePoint pt{pts.next(-6.0, 6.0), pts.next(-3.0, 8.0)};
      const complex a = wigner_moyal(bm, prec, pt);
      const complex b = wigner_moyal_position(bm, prec, pt);
      // Relative 1e-8 with a 1e-15 absolute floor for W near the rounding level.
      worst = std::max(worst, std::abs(a - b) / (std::abs(b) + 1e-7));
    }
    return verdict(worst <= 1e-8, "max |dW| / (|W| + 1e-7) = " + num(worst) + " <= 1e-8 at 20 points");
  });
  suite.run("states.husimi_normalization", [&] {
    // Phase-space integral of f over p in [-7, 33] and |x| <= 200; the
    // omitted x tail (f ~ |x|^-4) is below 1e-7.
    const PrecisionSpec prec(1.0);
    const QuadratureGrid gp = composite_gauss_legendre(12, 20, -7.0, 33.0);
    std::vector<double> xs;
    std::vector<double> wx;
    auto add = [&](const QuadratureGrid& g) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        xs.push_back(g.node(i));
        wx.push_back(g.weight(i));
      }
    };
    add(composite_gauss_legendre(12, 12, -12.0, 12.0));
    for (double a : {12.0, 24.0, 48.0, 96.0}) {
      const double b = a == 96.0 ? 200.0 : 2.0 * a;
      add(gauss_legendre(10, a, b));
      add(gauss_legendre(10, -b, -a));
    }
    CompensatedSum total;
    double smallest = 0.0;
    for (std::size_t i = 0; i < gp.size(); ++i)
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double f = husimi(bm, prec, {xs[k], gp.node(i)});
        smallest = std::min(smallest, f);
        total.add(gp.weight(i) * wx[k] * f);
      }
    const double err = std::fabs(total.value() - 1.0);
    return verdict(err <= 1e-6 && smallest >= 0.0,
                   "integral " + num(total.value()) + ", |err| " + num(err) + " <= 1e-6, min f " + num(smallest));
  });
  suite.run("states.husimi_matches_slice", [&] {
    const PrecisionSpec prec(1.7);
    double worst = 0.0;
    for (double eta : {-2.0, -0.5, 0.3, 1.0, 4.0}) {
      const double a = husimi(bm, prec, {0.0, eta});
      const double b = husimi_slice(eta, ExampleWidth(1.7));
      worst = std::max(worst, rel_err(a, b));
    }
    return verdict(worst <= 1e-8, "max rel difference " + num(worst));
  });
}

void example_checks(Suite& suite) {
  suite.run("efexample.closed_form_vs_quadrature", [] {
    double worst = 0.0;
    for (double s : {0.5, 1.0, 5.0, 10.0})
      for (double eta : {-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0}) {
        const double direct = integral_I_direct(eta, s);
        if (std::fabs(direct) < 1e-280) continue;
        worst = std::max(worst, rel_err(integral_I(eta, ExampleWidth(s)), direct));
      }
    return verdict(worst <= 1e-8, "max rel err " + num(worst) + " <= 1e-8 on 7 x 4 grid");
  });
  suite.run("efexample.current_bounds", [] {
    bool ok = true;
    double lowest = 1.0;
    for (double s : {0.01, 0.1, 0.5, 1.0, 3.0, 6.0, 20.0, 100.0}) {
      const double j = scaled_effective_current(ExampleWidth(s));
      ok = ok && std::isfinite(j) && j >= -kBracketConstant - 1e-12;
      lowest = std::min(lowest, j);
    }
    return verdict(ok, "min J " + num(lowest) + " >= -36/(35 pi) on s in [0.01, 100]");
  });
  suite.run("efexample.small_width_limit", [] {
    const double j = scaled_effective_current(ExampleWidth(0.05));
    const double err = std::fabs(j + 0.327404);
    return verdict(err <= 0.005, "J(0.05) = " + num(j) + ", |J + 0.327404| = " + num(err));
  });
  suite.run("efexample.critical_width", [] {
    const double s = critical_width(1e-6);
    const bool signs = scaled_effective_current(ExampleWidth(5.0)) < 0.0 &&
                       scaled_effective_current(ExampleWidth(6.5)) > 0.0;
    return verdict(s >= 5.2 && s <= 6.0 && signs, "s* = " + num(s) + " in [5.2, 6.0]; J(5) < 0 < J(6.5)");
  });
  suite.run("efexample.no_overflow", [] {
    bool ok = true;
    for (double s : {1e-2, 0.3, 1.0, 10.0, 1e2})
      for (double eta = -1e3; eta <= 1e3; eta += 12.5) ok = ok && std::isfinite(integral_I(eta, ExampleWidth(s)));
    return verdict(ok, "I finite for s in [1e-2, 1e2], eta in [-1e3, 1e3]");
  });
}

void maxflow_checks(Suite& suite, bool fault) {
  suite.run("maxflow.correction_nonpositive", [] {
    double largest = -1.0;
    for (double s : {0.1, 1.0, 10.0})
      for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
          largest = std::max(largest, u_correction(0.2 * i, 0.2 * j, MaxflowWidth(s)));
    return verdict(largest <= 0.0, "max U on 50 x 50 grid = " + num(largest));
  });
  suite.run("maxflow.correction_vs_quadrature", [] {
    Points pts(3);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double u = pts.next(0.0, 3.0);
      const double v = pts.next(0.0, 3.0);
      const double s = pts.next(0.2, 3.0);
      const double lo = -std::max(u, v) - 14.0 * s;
      const QuadratureGrid g = composite_gauss_legendre(30, 40, std::min(lo, -1.0), 0.0);
      const double direct = 4.0 / (std::sqrt(kPi) * s) * g.integrate([&](double w) {
        return w * std::exp(-2.0 * ((w - u) * (w - u) + (w - v) * (w - v)) / (s * s));
      });
      const double closed = u_correction(u, v, MaxflowWidth(s));
      worst = std::max(worst, std::fabs(closed - direct) / std::max(std::fabs(direct), 1e-300));
    }
    return verdict(worst <= 1e-9, "max rel err " + num(worst) + " over 20 pairs");
  });
  suite.run("maxflow.kernel_reduction", [] {
    double worst = 0.0;
    for (int i = 0; i < 30; ++i)
      for (int j = 0; j < 30; ++j) {
        const double u = 0.2 * i;
        const double v = 0.2 * j;
        worst = std::max(worst, std::fabs(kernel_entry(u, v, MaxflowWidth(1e-8)) - kernel_entry(u, v, MaxflowWidth(0.0))));
      }
    return verdict(worst <= 1e-6, "max |K(1e-8) - K(0)| = " + num(worst));
  });
  suite.run("maxflow.free_bound", [fault] {
    const EigenResult r = max_backflow(MaxflowWidth(0.0), reduced(fault));
    const double err = std::fabs(r.delta_max - kFreeBound);
    const bool residual_ok = r.primary.residual <= 1e-10 * r.primary.matrix_norm;
    return verdict(err <= 1e-3 && residual_ok,
                   "Delta(0) = " + num(r.delta_max) + " (300 nodes, u_max 8), |err| " + num(err) + " <= 1e-3");
  });
  suite.run("maxflow.half_bound_width", [fault] {
    const double d0 = max_backflow(MaxflowWidth(0.0), reduced(fault)).delta_max;
    const double d1 = max_backflow(MaxflowWidth(1.29), reduced(fault)).delta_max;
    const double ratio = d1 / d0;
    return verdict(std::fabs(ratio - 0.5) <= 0.03, "Delta(1.29)/Delta(0) = " + num(ratio));
  });
  suite.run("maxflow.monotone_decay", [fault] {
    const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    const SweepResult sweep = varsigma_sweep(grid, reduced(fault));
    bool ok = true;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
      ok = ok && sweep.rows[i].value > 0.0;
      if (i > 0) ok = ok && sweep.rows[i].value < sweep.rows[i - 1].value;
    }
    return verdict(ok, "Delta(3) = " + num(sweep.rows.back().value) + ", strictly decreasing and > 0");
  });
  suite.run("maxflow.rayleigh_bound", [fault] {
    const MaxflowWidth w(1.0);
    const TruncatedSolution sol = solve_truncated(w, 200, 8.0, fault);
    const DiscretizedKernel k = assemble(sol.grid, w, fault);
    Points pts(5);
    double excess = -1.0;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> v(sol.grid.size());
      double len = 0.0;
      for (double& x : v) {
        x = pts.next(-1.0, 1.0);
        len += x * x;
      }
      for (double& x : v) x /= std::sqrt(len);
      excess = std::max(excess, k.matrix.quadratic_form(v) - sol.eigenvalue);
    }
    return verdict(excess <= 1e-12, "max Rayleigh quotient - Delta = " + num(excess));
  });
  suite.run("maxflow.time_consistency", [fault] {
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
      const TruncatedSolution sol = solve_truncated(MaxflowWidth(s), 300, 8.0, fault);
      const TimeResolvedCurrent j(sol.grid, sol.phi, MaxflowWidth(s));
      worst = std::max(worst, std::fabs(j.transfer() - sol.eigenvalue));
    }
    return verdict(worst <= 1e-5, "max |-int j - lambda| = " + num(worst));
  });
  suite.run("maxflow.current_time_reflection", [] {
    const TruncatedSolution sol = solve_truncated(MaxflowWidth(1.0), 200, 8.0);
    const TimeResolvedCurrent j(sol.grid, sol.phi, MaxflowWidth(1.0));
    double worst = 0.0;
    for (double tau : {0.05, 0.2, 0.37, 0.61, 0.9}) worst = std::max(worst, std::fabs(j(tau) - j(1.0 - tau)));
    return verdict(worst <= 1e-12, "max |j(tau) - j(1 - tau)| = " + num(worst));
  });
  suite.run("maxflow.feasibility", [] {
    const Feasibility a = feasibility({1.0, 1.0, 1.0, 1.0});
    const Feasibility b = feasibility({1.0, 2.0, 1.0, 1.0});
    const Feasibility c = feasibility({1.0, 0.5, 1.0, 1.0});
    const bool ok = a.feasible && a.varsigma == 1.0 && !b.feasible && b.varsigma == 2.0 && c.feasible &&
                    c.varsigma == 0.5;
    return verdict(ok, "varsigma 1 / 2 / 0.5 give feasible / not feasible / feasible");
  });
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opts) {
  Suite suite;
  specfun_checks(suite);
  states_checks(suite);
  example_checks(suite);
  maxflow_checks(suite, opts.inject_kernel_sign_fault);
  return suite.take();
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::string text;
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failed;
    text += (r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
  }
  text += std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " checks passed\n";
  return text;
}

}  // namespace qbf
