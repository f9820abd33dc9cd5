// Error functions after W. J. Cody, "Rational Chebyshev approximations for
// the error function", Math. Comp. 23 (1969) 631-638 (netlib specfun CALERF).

#include <cmath>
#include <limits>
#include <numbers>

#include "qbf/specfun.hpp"

namespace qbf {
namespace {

enum class Kind { erf, erfc, erfcx };

constexpr double kA[5] = {3.1611237438705656,  113.864154151050156, 377.485237685302021,
                          3209.37758913846947, 0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                          2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                          298.635138197400131,  881.95222124176909,  1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                          1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                          0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                          0.0605183413124413191, 0.00233520497626869185};

constexpr double kSqrtPiInv = 0.56418958354775628695;
constexpr double kThresh = 0.46875;
constexpr double kXsmall = 1.11e-16;
constexpr double kXbig = 26.543;
constexpr double kXhuge = 6.71e7;
constexpr double kXmax = 2.53e307;
constexpr double kXneg = -26.628;

// exp(-y^2) with y^2 split as (trunc(16y)/16)^2 + remainder, which keeps the
// exponent exact to working precision for large y.
double exp_neg_square(double y) {
  const double head = std::trunc(y * 16.0) / 16.0;
  const double tail = (y - head) * (y + head);
  return std::exp(-head * head) * std::exp(-tail);
}

double calerf(double x, Kind kind) {
  const double y = std::fabs(x);
  double result = 0.0;

  if (y <= kThresh) {
    const double ysq = y > kXsmall ? y * y : 0.0;
    double num = kA[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
      num = (num + kA[i]) * ysq;
      den = (den + kB[i]) * ysq;
    }
    result = x * (num + kA[3]) / (den + kB[3]);
    if (kind != Kind::erf) result = 1.0 - result;
    if (kind == Kind::erfcx) result *= std::exp(ysq);
    return result;
  }

  if (y <= 4.0) {
    double num = kC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kC[i]) * y;
      den = (den + kD[i]) * y;
    }
    result = (num + kC[7]) / (den + kD[7]);
    if (kind != Kind::erfcx) result *= exp_neg_square(y);
  } else {
    bool tail_done = false;
    if (y >= kXbig) {
      if (kind != Kind::erfcx || y >= kXmax) {
        tail_done = true;
      } else if (y >= kXhuge) {
        result = kSqrtPiInv / y;
        tail_done = true;
      }
    }
    if (!tail_done) {
      const double ysq = 1.0 / (y * y);
      double num = kP[5] * ysq;
      double den = ysq;
      for (int i = 0; i < 4; ++i) {
        num = (num + kP[i]) * ysq;
        den = (den + kQ[i]) * ysq;
      }
      result = ysq * (num + kP[4]) / (den + kQ[4]);
      result = (kSqrtPiInv - result) / y;
      if (kind != Kind::erfcx) result *= exp_neg_square(y);
    }
  }

  // Reflection to negative arguments.
  switch (kind) {
    case Kind::erf:
      result = (0.5 - result) + 0.5;
      if (x < 0.0) result = -result;
      break;
    case Kind::erfc:
      if (x < 0.0) result = 2.0 - result;
      break;
    case Kind::erfcx:
      if (x < 0.0) {
        if (x < kXneg) return std::numeric_limits<double>::infinity();
        const double head = std::trunc(x * 16.0) / 16.0;
        const double tail = (x - head) * (x + head);
        const double e = std::exp(head * head) * std::exp(tail);
        result = (e + e) - result;
      }
      break;
  }
  return result;
}

}  // namespace

double erf(double x) { return calerf(x, Kind::erf); }
double erfc(double x) { return calerf(x, Kind::erfc); }
double erfcx(double x) { return calerf(x, Kind::erfcx); }

double erfcx_deficit(double z) {
  if (!(z >= 4.0)) return 1.0 - std::sqrt(std::numbers::pi) * z * erfcx(z);
  const double ysq = 1.0 / (z * z);
  double num = kP[5] * ysq;
  double den = ysq;
  for (int i = 0; i < 4; ++i) {
    num = (num + kP[i]) * ysq;
    den = (den + kQ[i]) * ysq;
  }
  return std::sqrt(std::numbers::pi) * ysq * (num + kP[4]) / (den + kQ[4]);
}

double gauss_erfcx(double z, double log_gauss, double log_combined) {
  if (z >= 0.0) return std::exp(log_gauss) * erfcx(z);
  return std::exp(log_combined) * erfc(z);
}

}  // namespace qbf
