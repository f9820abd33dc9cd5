#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qbf/errors.hpp"
#include "qbf/specfun.hpp"

using namespace qbf;
using oracle::rel_err;

TEST_CASE("erfc reference values") {
  CHECK(qbf::erfc(0.0) == 1.0);
  CHECK(std::fabs(qbf::erfc(-1.7) + qbf::erfc(1.7) - 2.0) <= 1e-15);
  // Oracle: adaptive quadrature of the defining integral.
  const double tail = 2.0 / std::sqrt(oracle::kPi) *
                      oracle::integrate([](double y) { return std::exp(-y * y); }, 1.0, 12.0);
  CHECK(rel_err(qbf::erfc(1.0), tail) <= 1e-14);
  CHECK(rel_err(qbf::erfc(1.0), 0.15729920705028513066) <= 1e-15);
}

TEST_CASE("erfc and erfcx agree with an independent implementation") {
  double worst_erfc = 0.0;
  double worst_erfcx = 0.0;
  for (double x = -6.0; x <= 26.0; x += 0.0173) {
    worst_erfc = std::max(worst_erfc, rel_err(qbf::erfc(x), boost::math::erfc(x)));
    if (x <= 25.0) {
      const double ref = static_cast<double>(std::exp(static_cast<long double>(x) * x) *
                                             boost::math::erfc(static_cast<long double>(x)));
      worst_erfcx = std::max(worst_erfcx, rel_err(erfcx(x), ref));
    }
  }
  CHECK(worst_erfc <= 1e-14);
  CHECK(worst_erfcx <= 1e-13);
  CHECK(std::fabs(qbf::erf(1e-5) - boost::math::erf(1e-5)) <= 1e-20);
  CHECK(rel_err(qbf::erf(0.3), boost::math::erf(0.3)) <= 1e-15);
}

TEST_CASE("erfc is strictly decreasing inside (0, 2)") {
  // Below x = -5.5 the result is 2 to within one ulp.
  double prev = qbf::erfc(-5.5);
  for (double x = -5.49; x <= 26.5; x += 0.01) {
    const double v = qbf::erfc(x);
    REQUIRE(v < prev);
    REQUIRE(v > 0.0);
    REQUIRE(v < 2.0);
    prev = v;
  }
}

TEST_CASE("erfcx values and identity") {
  CHECK(erfcx(0.0) == 1.0);
  CHECK(rel_err(erfcx(0.8) * std::exp(-0.64), qbf::erfc(0.8)) <= 1e-13);
  // Asymptotic series 1/(x sqrt pi) sum_k (-1)^k (2k-1)!! / (2x^2)^k, five terms.
  const double x = 50.0;
  const double h = 1.0 / (2.0 * x * x);
  const double series = 1.0 / (x * std::sqrt(oracle::kPi)) * (1.0 - h + 3 * h * h - 15 * h * h * h + 105 * h * h * h * h);
  CHECK(rel_err(erfcx(50.0), series) <= 1e-13);
  CHECK(rel_err(erfcx(50.0), 0.011281536265323773) <= 1e-13);
  for (double t = -5.0; t <= 5.0; t += 0.01) REQUIRE(rel_err(erfcx(t) * std::exp(-t * t), qbf::erfc(t)) <= 1e-13);
  CHECK(std::isfinite(erfcx(1e4)));
  CHECK(rel_err(erfcx(1e6), 1.0 / (1e6 * std::sqrt(oracle::kPi))) <= 1e-12);
}

TEST_CASE("erfcx deficit keeps relative accuracy in the tail") {
  for (double z : {0.0, 0.3, 1.0, 3.9, 4.0, 7.5, 30.0, 1e3}) {
    const long double zl = z;
    const long double ref = 1.0L - std::sqrt(std::numbers::pi_v<long double>) * zl * std::exp(zl * zl) *
                                       boost::math::erfc(zl);
    if (z > 100.0) {
      // 1 - sqrt(pi) z erfcx(z) = h - 3h^2 + 15h^3 - ... with h = 1/(2 z^2).
      const double h = 1.0 / (2.0 * z * z);
      CHECK(rel_err(erfcx_deficit(z), h - 3 * h * h + 15 * h * h * h) <= 1e-12);
    } else {
      CHECK(rel_err(erfcx_deficit(z), static_cast<double>(ref)) <= 1e-12);
    }
  }
}

TEST_CASE("gauss_erfcx follows the sign of its argument") {
  // exp(g) erfcx(z) for z >= 0, exp(g + z^2) erfc(z) otherwise.
  CHECK(rel_err(gauss_erfcx(1.5, -3.0, -3.0 + 2.25), std::exp(-3.0) * erfcx(1.5)) <= 1e-15);
  CHECK(rel_err(gauss_erfcx(-30.0, -1000.0, -100.0), std::exp(-100.0) * qbf::erfc(-30.0)) <= 1e-15);
  CHECK(std::isfinite(gauss_erfcx(-40.0, -2000.0, -400.0)));
}

TEST_CASE("Gauss-Legendre rules") {
  const QuadratureGrid one = gauss_legendre(1, -1.0, 1.0);
  REQUIRE(one.size() == 1);
  CHECK(std::fabs(one.node(0)) <= 1e-300);
  CHECK(one.weight(0) == doctest::Approx(2.0).epsilon(1e-15));

  const QuadratureGrid two = gauss_legendre(2, 0.0, 1.0);
  CHECK(std::fabs(two.integrate([](double x) { return x * x; }) - 1.0 / 3.0) <= 1e-15);

  const QuadratureGrid wide = gauss_legendre(200, 0.0, 40.0);
  CHECK(std::fabs(wide.integrate([](double x) { return x * std::exp(-x); }) - 1.0) <= 1e-12);

  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), InvalidArgument);
}

TEST_CASE("Gauss-Legendre exactness up to degree 2n - 1") {
  for (std::size_t n : {1u, 3u, 8u, 20u, 64u, 100u}) {
    const QuadratureGrid g = gauss_legendre(n, -1.0, 1.0);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(g.weight(i) > 0.0);
      if (i > 0) REQUIRE(g.node(i) > g.node(i - 1));
      weight_sum += g.weight(i);
    }
    CHECK(std::fabs(weight_sum - 2.0) <= 1e-14);
    for (std::size_t k = 0; k <= 2 * n - 1; ++k) {
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(k + 1);
      const double got = g.integrate([&](double x) { return std::pow(x, static_cast<double>(k)); });
      REQUIRE(std::fabs(got - exact) <= 1e-14);
    }
  }
}

TEST_CASE("composite rule covers the interval") {
  const QuadratureGrid g = composite_gauss_legendre(7, 9, -2.0, 5.0);
  CHECK(g.size() == 63);
  CHECK(g.lo() == -2.0);
  CHECK(g.hi() == 5.0);
  CHECK(g.integrate([](double x) { return std::cos(x); }) == doctest::Approx(std::sin(5.0) - std::sin(-2.0)).epsilon(1e-13));
}

TEST_CASE("bisect") {
  CHECK(std::fabs(bisect([](double x) { return x - 2.0; }, 0.0, 5.0, 1e-10) - 2.0) <= 1e-10);
  CHECK(std::fabs(bisect([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-12) - oracle::kPi / 2) <= 1e-12);
  CHECK(std::fabs(bisect([](double x) { return x * x * x; }, -1.0, 2.0, 1e-9)) <= 1e-9);
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-6), NoBracket);
  CHECK_THROWS_AS(bisect([](double x) { return x < 0.3 ? -1.0 : std::nan(""); }, 0.0, 1.0, 1e-6), NonFinite);
  const double a = bisect([](double x) { return std::tanh(x - 0.123); }, -3.0, 4.0, 1e-13);
  const double b = bisect([](double x) { return std::tanh(x - 0.123); }, -3.0, 4.0, 1e-13);
  CHECK(a == b);
}

TEST_CASE("sym_eig_max picks the algebraically largest eigenvalue") {
  const auto identity = SymmetricMatrix::generate(5, [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; });
  CHECK(sym_eig_max(identity).value == doctest::Approx(1.0).epsilon(1e-14));

  const double d[] = {3.0, -7.0, 1.0};
  const auto diag = SymmetricMatrix::generate(3, [&](std::size_t i, std::size_t j) { return i == j ? d[i] : 0.0; });
  const EigenPair top = sym_eig_max(diag);
  CHECK(top.value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::fabs(top.vector[0] - 1.0) <= 1e-12);

  const auto swap = SymmetricMatrix::generate(2, [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0; });
  const EigenPair s = sym_eig_max(swap);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(s.vector[0] - 1.0 / std::sqrt(2.0)) <= 1e-12);
  CHECK(std::fabs(s.vector[1] - 1.0 / std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("sym_eig_max: residual, normalization, shift and determinism") {
  oracle::Points pts(42);
  const std::size_t n = 120;
  std::vector<double> vals(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) vals[i * n + j] = vals[j * n + i] = pts(-1.0, 1.0);
  const auto m = SymmetricMatrix::generate(n, [&](std::size_t i, std::size_t j) { return vals[i * n + j]; });
  const EigenPair a = sym_eig_max(m);
  CHECK(a.residual <= 1e-10 * m.norm());

  double len = 0.0;
  std::size_t big = 0;
  for (std::size_t i = 0; i < n; ++i) {
    len += a.vector[i] * a.vector[i];
    if (std::fabs(a.vector[i]) > std::fabs(a.vector[big])) big = i;
  }
  CHECK(std::fabs(len - 1.0) <= 1e-13);
  CHECK(a.vector[big] > 0.0);
  CHECK(std::fabs(m.quadratic_form(a.vector) - a.value) <= 1e-12);

  const double c = -2.25;
  const auto shifted =
      SymmetricMatrix::generate(n, [&](std::size_t i, std::size_t j) { return vals[i * n + j] + (i == j ? c : 0.0); });
  const EigenPair b = sym_eig_max(shifted);
  CHECK(std::fabs(b.value - a.value - c) <= 1e-12);
  double dv = 0.0;
  for (std::size_t i = 0; i < n; ++i) dv = std::max(dv, std::fabs(a.vector[i] - b.vector[i]));
  CHECK(dv <= 1e-9);

  const EigenPair again = sym_eig_max(m);
  CHECK(again.value == a.value);
  CHECK(again.vector == a.vector);
}

TEST_CASE("sym_eig_max rejects non-finite input") {
  const auto bad = SymmetricMatrix::generate(3, [](std::size_t i, std::size_t j) {
    return i == 1 && j == 2 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  });
  CHECK_THROWS_AS(sym_eig_max(bad), NonConvergence);
}

TEST_CASE("SymmetricMatrix stores both triangles from one value") {
  SymmetricMatrix m(3);
  m.set(0, 2, 4.5);
  CHECK(m(2, 0) == 4.5);
  CHECK(m(0, 2) == 4.5);
  m.set(1, 1, -2.0);
  CHECK(m.trace() == -2.0);
  CHECK(m.norm() == 4.5);
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y = m.multiply(x);
  CHECK(y == std::vector<double>{13.5, -4.0, 4.5});
}

TEST_CASE("compensated sum recovers cancelled digits") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);
}
