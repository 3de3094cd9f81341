// SPDX-License-Identifier: Apache-2.0

#include "tolstack/numerics.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "tolstack/error.hpp"

namespace tolstack::numerics {

namespace {

void require_positive_finite(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << what << ": argument must be positive and finite, got " << x;
    throw Error(ErrorCode::Domain, os.str());
  }
}

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "objective is not finite at x = " << x;
    throw Error(ErrorCode::NonFinite, os.str());
  }
  return y;
}

constexpr int kMaxIterations = 400;

}  // namespace

Bracket::Bracket(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo >= 0.0) || !(lo < hi)) {
    std::ostringstream os;
    os << "invalid bracket [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::InvalidBracket, os.str());
  }
}

double h_stable(double x) {
  require_positive_finite(x, "h_stable");
  if (x < kHSeriesSwitch) {
    const double x2 = x * x;
    return -0.5 * x + x2 / 24.0 - x2 * x2 / 2880.0;
  }
  if (x < 1.0) {
    // (1 - e^-x)/x lies in (0.63, 1); subtracting 1 is exact.
    return std::log1p(-std::expm1(-x) / x - 1.0);
  }
  return std::log(-std::expm1(-x)) - std::log(x);
}

double log_sinh_over_x(double x) {
  require_positive_finite(x, "log_sinh_over_x");
  if (x < 0.1) {
    // x + h(2x) cancels to O(x^2) here; use the even series instead.
    const double x2 = x * x;
    return x2 * (1.0 / 6.0 +
                 x2 * (-1.0 / 180.0 + x2 * (1.0 / 2835.0 + x2 * (-1.0 / 37800.0 + x2 / 467775.0))));
  }
  return x + h_stable(2.0 * x);
}

Minimum minimize_1d(const std::function<double(double)>& f, const Bracket& bracket,
                    double rel_tol, Scale scale) {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::Domain, "minimize_1d: rel_tol must be positive");
  const bool log_scale = scale == Scale::Log;
  if (log_scale && !(bracket.lo() > 0.0)) {
    throw Error(ErrorCode::InvalidBracket, "minimize_1d: log scale needs lo > 0");
  }

  auto to_x = [&](double u) { return log_scale ? std::exp(u) : u; };
  auto eval = [&](double u) { return checked(f, to_x(u)); };

  double a = log_scale ? std::log(bracket.lo()) : bracket.lo();
  double b = log_scale ? std::log(bracket.hi()) : bracket.hi();

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);

  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (a + b);
    const double width = b - a;
    const double tol = log_scale ? rel_tol : rel_tol * std::max(std::abs(mid), 1e-300);
    if (width <= tol) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }

  Minimum best{to_x(c), fc};
  if (fd < fc) best = {to_x(d), fd};

  const double f_lo = checked(f, bracket.lo());
  const double f_hi = checked(f, bracket.hi());
  if (f_lo <= best.min_value) best = {bracket.lo(), f_lo, true, false};
  if (f_hi < best.min_value) best = {bracket.hi(), f_hi, false, true};
  return best;
}

double invert_monotone(const std::function<double(double)>& g, double target,
                       const Bracket& bracket, double rel_tol) {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::Domain, "invert_monotone: rel_tol must be positive");
  double lo = bracket.lo();
  double hi = bracket.hi();
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (std::isnan(g_lo) || std::isnan(g_hi) || !(g_lo >= target) || !(target >= g_hi)) {
    std::ostringstream os;
    os << "bracket [" << lo << ", " << hi << "] does not straddle target " << target
       << " (g(lo) = " << g_lo << ", g(hi) = " << g_hi << ")";
    throw Error(ErrorCode::NoStraddle, os.str());
  }
  for (int it = 0; it < kMaxIterations; ++it) {
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::isnan(gm)) throw Error(ErrorCode::NonFinite, "invert_monotone: g returned NaN");
    if (gm > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace tolstack::numerics
