#include <cmath>
#include <sstream>

#include "qbf/errors.hpp"
#include "qbf/specfun.hpp"

namespace qbf {

namespace {

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "function value not finite at x = " << x;
    throw NonFinite(msg.str());
  }
  return y;
}

}  // namespace

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("bisect: tol must be > 0");
  if (!(lo < hi)) throw InvalidArgument("bisect: require lo < hi");
  double f_lo = checked(f, lo);
  const double f_hi = checked(f, hi);
  if (!(f_lo * f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]: f(lo) = " << f_lo
        << ", f(hi) = " << f_hi;
    throw NoBracket(msg.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    const double f_mid = checked(f, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qbf
