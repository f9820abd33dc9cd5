#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qbf/efexample.hpp"
#include "qbf/errors.hpp"

using namespace qbf;
using oracle::rel_err;

namespace {

// J^(s) with the bracket integral evaluated by the same independent
// quadrature as the I oracle.
double current_oracle(double s) {
  auto f = [&](double eta) {
    const double i = oracle::integral_I(eta, s);
    return eta * i * i;
  };
  const double bracket_integral = oracle::integrate(f, -12.0 * s, 0.0);
  return -(18.0 / (35.0 * oracle::kPi)) * (2.0 + 9.0 / (std::sqrt(oracle::kPi) * s) * bracket_integral);
}

}  // namespace

TEST_CASE("width validation") {
  CHECK_THROWS_AS(ExampleWidth(0.0), InvalidArgument);
  CHECK_THROWS_AS(ExampleWidth(-1.0), InvalidArgument);
  CHECK_THROWS_AS(ExampleWidth(std::nan("")), InvalidArgument);
  CHECK(ExampleWidth(0.3).s() == 0.3);
}

TEST_CASE("closed form of I matches direct quadrature") {
  CHECK(rel_err(integral_I(2.0, ExampleWidth(1.0)), oracle::integral_I(2.0, 1.0)) <= 1e-10);
  CHECK(rel_err(integral_I(-3.0, ExampleWidth(5.0)), oracle::integral_I(-3.0, 5.0)) <= 1e-10);
  for (double s : {0.5, 1.0, 5.0, 10.0})
    for (double eta : {-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0}) {
      const double ref = oracle::integral_I(eta, s);
      const double got = integral_I(eta, ExampleWidth(s));
      if (ref == 0.0) {
        CHECK(std::fabs(got) <= 1e-300);
      } else {
        INFO("eta = " << eta << ", s = " << s);
        CHECK(rel_err(got, ref) <= 1e-8);
      }
    }
}

TEST_CASE("I is finite everywhere and vanishes deep in the tail") {
  CHECK(integral_I(-50.0, ExampleWidth(1.0)) == 0.0);
  for (double s : {1e-2, 0.1, 1.0, 10.0, 1e2})
    for (double eta = -1e3; eta <= 1e3; eta += 3.7) REQUIRE(std::isfinite(integral_I(eta, ExampleWidth(s))));
}

TEST_CASE("Husimi slice") {
  oracle::Points pts(8);
  for (int k = 0; k < 30; ++k) {
    const double eta = pts(-10.0, 10.0);
    const double s = pts(0.05, 20.0);
    const double f = husimi_slice(eta, ExampleWidth(s));
    REQUIRE(f >= 0.0);
    const double i = oracle::integral_I(eta, s);
    CHECK(rel_err(f, 162.0 / (35.0 * std::pow(oracle::kPi, 1.5)) * i * i / s) <= 1e-8);
  }
  const double wide = husimi_slice(1.0, ExampleWidth(80.0));
  CHECK(std::isfinite(wide));
  CHECK(wide > 0.0);
}

TEST_CASE("scaled effective current") {
  CHECK(std::fabs(scaled_effective_current(ExampleWidth(0.1)) - oracle::kExampleCurrent) <= 0.01 * std::fabs(oracle::kExampleCurrent));
  CHECK(std::fabs(scaled_effective_current(ExampleWidth(0.05)) + 0.327404) <= 0.005);
  CHECK(scaled_effective_current(ExampleWidth(5.0)) < 0.0);
  CHECK(scaled_effective_current(ExampleWidth(6.5)) > 0.0);
  for (double s : {0.3, 1.0, 4.0, 8.0}) {
    INFO("s = " << s);
    CHECK(std::fabs(scaled_effective_current(ExampleWidth(s)) - current_oracle(s)) <= 1e-9);
  }
}

TEST_CASE("the integral term never lowers the current below its bare value") {
  // eta I^2 <= 0 on eta < 0, so the bracket is at most 2.
  for (double s : {0.01, 0.05, 0.2, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0}) {
    const double j = scaled_effective_current(ExampleWidth(s));
    REQUIRE(std::isfinite(j));
    CHECK(j >= oracle::kExampleCurrent - 1e-12);
  }
}

TEST_CASE("convergence failure is reported") {
  CurrentOptions opts;
  opts.nodes = 2;
  opts.max_refinements = 0;
  CHECK_THROWS_AS(scaled_effective_current(ExampleWidth(3.0), opts), QuadratureNotConverged);
}

TEST_CASE("critical width") {
  const double s_star = critical_width(1e-6);
  CHECK(s_star >= 5.2);
  CHECK(s_star <= 6.0);
  CHECK(scaled_effective_current(ExampleWidth(s_star - 0.5)) < 0.0);
  CHECK(scaled_effective_current(ExampleWidth(s_star + 0.5)) > 0.0);
  CHECK(std::fabs(scaled_effective_current(ExampleWidth(s_star))) <= 1e-5);
  CHECK_THROWS_AS(critical_width(0.0), InvalidArgument);
}

TEST_CASE("example sweep") {
  const std::vector<double> low{0.5, 1.0, 2.0};
  for (const auto& row : example_sweep(low).rows) CHECK(row.value < 0.0);
  const std::vector<double> high{7.0, 8.0, 9.0};
  for (const auto& row : example_sweep(high).rows) CHECK(row.value > 0.0);

  const std::vector<double> one{1.0};
  const SweepResult single = example_sweep(one);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].value == scaled_effective_current(ExampleWidth(1.0)));
  CHECK(single.rows[0].converged);

  const std::vector<double> unordered{1.0, 0.5};
  CHECK_THROWS_AS(example_sweep(unordered), InvalidArgument);
  const std::vector<double> bad{-1.0, 1.0};
  CHECK_THROWS_AS(example_sweep(bad), InvalidArgument);
}

TEST_CASE("default sweep is monotone increasing") {
  std::vector<double> s(100);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.1 + (10.0 - 0.1) * static_cast<double>(i) / 99.0;
  const SweepResult sweep = example_sweep(s);
  for (std::size_t i = 1; i < sweep.rows.size(); ++i) REQUIRE(sweep.rows[i].value > sweep.rows[i - 1].value);
  const std::string csv = example_sweep_csv(sweep);
  CHECK(csv.rfind("s,J_scaled,converged\n", 0) == 0);
}
