// SPDX-License-Identifier: Apache-2.0
//
// Stable special functions and scalar solvers used by the bound engines.

#pragma once

#include <functional>

namespace tolstack::numerics {

/// Closed search interval. Requires 0 <= lo < hi, both finite.
class Bracket {
public:
  Bracket(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

private:
  double lo_;
  double hi_;
};

inline constexpr double kLambdaRelTol = 1e-10;
inline constexpr double kInvertRelTol = 1e-9;

/// Below this argument h_stable switches to its Taylor series.
inline constexpr double kHSeriesSwitch = 1e-3;

/// h(x) = log((1 - exp(-x)) / x) for x > 0.
///
/// Accurate to a few ulps relative across [1e-300, 700]: a three-term
/// series below kHSeriesSwitch, log1p of the ratio up to x = 1 and the
/// split logarithm above.
double h_stable(double x);

/// log(sinh(x) / x) for x > 0; never overflows and is always >= 0.
double log_sinh_over_x(double x);

enum class Scale { Linear, Log };

struct Minimum {
  double argmin;
  double min_value;
  bool at_lower = false;  // argmin is the bracket's lower endpoint
  bool at_upper = false;  // argmin is the bracket's upper endpoint
};

/// Golden-section minimization of a unimodal f on the bracket.
///
/// With Scale::Log the search runs on log(x), which needs lo > 0 and gives
/// relative argmin accuracy rel_tol over brackets spanning many decades.
/// When f is monotone the corresponding endpoint is returned exactly.
Minimum minimize_1d(const std::function<double(double)>& f, const Bracket& bracket,
                    double rel_tol = kLambdaRelTol, Scale scale = Scale::Linear);

/// Bisection for g(t) = target with g nonincreasing and g(lo) >= target >= g(hi).
///
/// Returns the upper end of the final interval, so g(result) <= target.
double invert_monotone(const std::function<double(double)>& g, double target,
                       const Bracket& bracket, double rel_tol = kInvertRelTol);

}  // namespace tolstack::numerics
