#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "qbf/errors.hpp"
#include "qbf/maxflow.hpp"

using namespace qbf;
using oracle::rel_err;

namespace {

MaxflowOptions small_grid() {
  MaxflowOptions o;
  o.nodes = 300;
  o.u_max = 8.0;
  return o;
}

}  // namespace

TEST_CASE("width validation") {
  CHECK_THROWS_AS(MaxflowWidth(-0.1), InvalidArgument);
  CHECK_THROWS_AS(MaxflowWidth(std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK(MaxflowWidth(0.0).value() == 0.0);
}

TEST_CASE("negative-momentum correction") {
  for (double s : {0.1, 1.0, 2.0}) CHECK(rel_err(u_correction(0.0, 0.0, MaxflowWidth(s)), -s / (2.0 * std::sqrt(oracle::kPi))) <= 1e-15);
  CHECK(u_correction(1.0, 2.0, MaxflowWidth(0.0)) == 0.0);
  CHECK(rel_err(u_correction(1.0, 2.0, MaxflowWidth(0.5)), oracle::u_correction(1.0, 2.0, 0.5)) <= 1e-9);

  oracle::Points pts(25);
  for (int k = 0; k < 20; ++k) {
    const double u = pts(0.0, 4.0);
    const double v = pts(0.0, 4.0);
    const double s = pts(0.1, 4.0);
    REQUIRE(u_correction(u, v, MaxflowWidth(s)) == u_correction(v, u, MaxflowWidth(s)));
    // The erfc form written out with Boost as a second, unrelated evaluation.
    const double printed = (u + v) / 2.0 * std::exp(-(u - v) * (u - v) / (s * s)) * boost::math::erfc((u + v) / s) -
                           s / (2.0 * std::sqrt(oracle::kPi)) * std::exp(-2.0 * (u * u + v * v) / (s * s));
    INFO("u = " << u << ", v = " << v << ", s = " << s);
    const double ref = oracle::u_correction(u, v, s);
    CHECK(rel_err(u_correction(u, v, MaxflowWidth(s)), ref) <= 1e-9);
    CHECK(std::fabs(printed - ref) <= 1e-12 * std::fabs(s));
  }
  CHECK_THROWS_AS(u_correction(-1.0, 0.0, MaxflowWidth(1.0)), InvalidArgument);
}

TEST_CASE("correction is never positive") {
  for (double s : {0.1, 1.0, 10.0})
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) REQUIRE(u_correction(0.25 * i, 0.25 * j, MaxflowWidth(s)) <= 0.0);
}

TEST_CASE("kernel entries") {
  for (double u : {0.0, 0.5, 3.0}) CHECK(kernel_entry(u, u, MaxflowWidth(0.0)) == doctest::Approx(-2.0 * u / oracle::kPi).epsilon(1e-15));
  for (auto [u, v] : {std::pair{0.3, 1.1}, std::pair{2.0, 0.5}, std::pair{4.0, 4.5}})
    CHECK(rel_err(kernel_entry(u, v, MaxflowWidth(0.0)), std::sin(u * u - v * v) / (oracle::kPi * (v - u))) <= 1e-13);

  // Continuity across the Taylor band.
  const double u = 1.7;
  const MaxflowWidth w(0.8);
  CHECK(std::fabs(kernel_entry(u, u + 1e-10, w) - kernel_entry(u, u, w)) <= 1e-9);
  CHECK(std::fabs(kernel_entry(u, u + 1e-7, w) - kernel_entry(u, u, w)) <= 1e-6);

  oracle::Points pts(6);
  for (int k = 0; k < 20; ++k) {
    const double a = pts(0.0, 6.0);
    const double b = pts(0.0, 6.0);
    const MaxflowWidth ws(pts(0.0, 3.0));
    REQUIRE(kernel_entry(a, b, ws) == kernel_entry(b, a, ws));
  }

  double worst = 0.0;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      worst = std::max(worst, std::fabs(kernel_entry(0.2 * i, 0.2 * j, MaxflowWidth(1e-8)) -
                                        kernel_entry(0.2 * i, 0.2 * j, MaxflowWidth(0.0))));
  CHECK(worst <= 1e-6);
}

TEST_CASE("assembly") {
  const QuadratureGrid grid = gauss_legendre(120, 0.0, 6.0);
  const DiscretizedKernel k = assemble(grid, MaxflowWidth(0.0));
  CHECK(k.matrix.order() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) {
      REQUIRE(k.matrix(i, j) == k.matrix(j, i));
      REQUIRE(std::isfinite(k.matrix(i, j)));
    }
  CHECK(std::fabs(k.matrix.trace() + 36.0 / oracle::kPi) <= 1e-12);
  const DiscretizedKernel neg = assemble(grid, MaxflowWidth(0.0), true);
  CHECK(neg.matrix(3, 7) == -k.matrix(3, 7));
  CHECK_THROWS_AS(assemble(gauss_legendre(10, 1.0, 6.0), MaxflowWidth(0.0)), InvalidArgument);
}

TEST_CASE("free-particle bound at default resolution") {
  const EigenResult r = max_backflow(MaxflowWidth(0.0));
  CHECK(std::fabs(r.delta_max - oracle::kFreeBound) <= 1e-3);
  CHECK(r.primary.residual <= 1e-10 * r.primary.matrix_norm);
  REQUIRE(r.partner.has_value());
  CHECK(r.partner->grid.size() == 450);
  CHECK(r.partner->grid.hi() == 9.0);
  CHECK(r.delta_max == extrapolate_tail(12.0, r.primary.eigenvalue, 9.0, r.partner->eigenvalue));
  double norm = 0.0;
  for (std::size_t i = 0; i < r.primary.phi.size(); ++i) norm += r.primary.grid.weight(i) * r.primary.phi[i] * r.primary.phi[i];
  CHECK(std::fabs(norm - 1.0) <= 1e-12);

  MaxflowOptions raw;
  raw.extrapolate_tail = false;
  const EigenResult plain = max_backflow(MaxflowWidth(0.0), raw);
  CHECK(plain.delta_max == plain.primary.eigenvalue);
  CHECK_FALSE(plain.partner.has_value());
  CHECK(plain.delta_max < r.delta_max);
}

TEST_CASE("option validation") {
  MaxflowOptions o;
  o.nodes = 49;
  CHECK_THROWS_AS(max_backflow(MaxflowWidth(0.0), o), InvalidArgument);
  o.nodes = 100;
  o.u_max = 3.9;
  CHECK_THROWS_AS(max_backflow(MaxflowWidth(0.0), o), InvalidArgument);
  o.u_max = 8.0;
  o.tail_ratio = 1.0;
  CHECK_THROWS_AS(max_backflow(MaxflowWidth(0.0), o), InvalidArgument);
  CHECK_THROWS_AS(extrapolate_tail(4.0, 1.0, 4.0, 2.0), InvalidArgument);
}

TEST_CASE("resolution diagnostic") {
  MaxflowOptions o = small_grid();
  o.check_resolution = true;
  const EigenResult r = max_backflow(MaxflowWidth(1.0), o);
  REQUIRE(r.resolution_shift.has_value());
  CHECK(*r.resolution_shift <= 1e-4);
  CHECK_FALSE(r.resolution_warning);
  o.nodes = 50;
  o.u_max = 12.0;
  const EigenResult coarse = max_backflow(MaxflowWidth(0.0), o);
  CHECK(coarse.resolution_warning);
}

TEST_CASE("maximal backflow decays with the precision width") {
  const std::vector<double> widths{0.0, 0.25, 1.0, 3.0};
  const SweepResult sweep = varsigma_sweep(widths, small_grid());
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& row = sweep.rows[i];
    CHECK(row.value > 0.0);
    CHECK(row.value < 1.0);
    CHECK(row.diagnostics[0] == row.parameter * row.parameter);
    CHECK(row.diagnostics[1] == std::log(row.value));
    CHECK(row.diagnostics[4] <= 1e-10);
    if (i > 0) CHECK(row.value < sweep.rows[i - 1].value);
  }
  const std::vector<double> first{0.0};
  CHECK(varsigma_sweep(first, small_grid()).rows[0].value == max_backflow(MaxflowWidth(0.0), small_grid()).delta_max);
  const std::vector<double> unordered{1.0, 0.0};
  CHECK_THROWS_AS(varsigma_sweep(unordered, small_grid()), InvalidArgument);
}

TEST_CASE("half-bound width") {
  const double d0 = max_backflow(MaxflowWidth(0.0)).delta_max;
  const double d1 = max_backflow(MaxflowWidth(1.29)).delta_max;
  CHECK(std::fabs(d1 / d0 - 0.5) <= 0.03);
}

TEST_CASE("grid stability at varsigma = 1") {
  MaxflowOptions fine;
  fine.nodes = 1600;
  fine.u_max = 16.0;
  const double a = max_backflow(MaxflowWidth(1.0)).delta_max;
  const double b = max_backflow(MaxflowWidth(1.0), fine).delta_max;
  CHECK(std::fabs(a - b) <= 1e-4);
}

TEST_CASE("Rayleigh quotients stay below the top eigenvalue") {
  const MaxflowWidth w(0.7);
  const TruncatedSolution sol = solve_truncated(w, 250, 8.0);
  const DiscretizedKernel k = assemble(sol.grid, w);
  oracle::Points pts(77);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> v(sol.grid.size());
    double len = 0.0;
    for (double& x : v) {
      x = pts(-1.0, 1.0);
      len += x * x;
    }
    for (double& x : v) x /= std::sqrt(len);
    REQUIRE(k.matrix.quadratic_form(v) <= sol.eigenvalue + 1e-12);
  }
}

TEST_CASE("time-resolved current") {
  for (double s : {0.5, 1.0, 2.0}) {
    const TruncatedSolution sol = solve_truncated(MaxflowWidth(s), 800, 12.0);
    const TimeResolvedCurrent j(sol.grid, sol.phi, MaxflowWidth(s));
    INFO("varsigma = " << s);
    CHECK(std::fabs(j.transfer() - sol.eigenvalue) <= 1e-5);
    if (s == 1.0) {
      oracle::Points pts(9);
      for (int k = 0; k < 5; ++k) {
        const double tau = pts(0.0, 1.0);
        CHECK(std::fabs(j(tau) - j(1.0 - tau)) <= 1e-12);
      }
      CHECK(j(0.5) == time_resolved_current(sol.grid, sol.phi, MaxflowWidth(s), 0.5));
      CHECK_THROWS_AS(j(1.5), InvalidArgument);
    }
  }
  std::vector<double> unnormalized(100, 1.0);
  CHECK_THROWS_AS(TimeResolvedCurrent(gauss_legendre(100, 0.0, 6.0), unnormalized, MaxflowWidth(1.0)), InvalidArgument);
}

TEST_CASE("time-integrated transfer of the free eigenvectors reaches the bound") {
  const MaxflowOptions opts;
  const EigenResult r = max_backflow(MaxflowWidth(0.0), opts);
  const double tp = TimeResolvedCurrent(r.primary.grid, r.primary.phi, MaxflowWidth(0.0)).transfer();
  const double tq = TimeResolvedCurrent(r.partner->grid, r.partner->phi, MaxflowWidth(0.0)).transfer();
  const double combined = extrapolate_tail(r.primary.grid.hi(), tp, r.partner->grid.hi(), tq);
  CHECK(std::fabs(combined - oracle::kFreeBound) <= 1e-3);
}

TEST_CASE("feasibility") {
  Feasibility f = feasibility({1.0, 1.0, 1.0, 1.0});
  CHECK(f.varsigma == 1.0);
  CHECK(f.feasible);
  f = feasibility({1.0, 2.0, 1.0, 1.0});
  CHECK(f.varsigma == 2.0);
  CHECK_FALSE(f.feasible);
  f = feasibility({1.0, 0.5, 1.0, 1.0});
  CHECK(f.varsigma == 0.5);
  CHECK(f.feasible);
  f = feasibility({2.0, 3.0, 0.5, 0.25});
  CHECK(f.varsigma == doctest::Approx(3.0));
  CHECK_THROWS_AS(feasibility({0.0, 1.0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(feasibility({1.0, 1.0, -1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(feasibility({1.0, 1.0, 1.0, std::nan("")}), InvalidArgument);
}

TEST_CASE("CSV writers") {
  const std::vector<double> widths{0.0, 1.0};
  const std::string csv = varsigma_sweep_csv(varsigma_sweep(widths, small_grid()));
  CHECK(csv.rfind("varsigma,delta_max,varsigma_sq,ln_delta_max,nodes,umax,residual\n", 0) == 0);
  const TruncatedSolution sol = solve_truncated(MaxflowWidth(0.0), 60, 5.0);
  const std::string vec = eigenvector_csv(sol);
  CHECK(vec.rfind("u,weight,phi\n", 0) == 0);
  CHECK(std::count(vec.begin(), vec.end(), '\n') == 61);
}
