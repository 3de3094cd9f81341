// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations. Nothing here calls into the library's
// numerics, so every check built on these stays independent of the code
// under test.

#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_dec_float_50;

/// log((1 - e^-x) / x) to ~45 digits.
inline double h_reference(double xd) {
  const Big x(xd);
  if (xd < 1e-10) {
    const Big x2 = x * x;
    return static_cast<double>(-x / 2 + x2 / 24 - x2 * x2 / 2880 + x2 * x2 * x2 / 181440);
  }
  return static_cast<double>(boost::multiprecision::log((1 - boost::multiprecision::exp(-x)) / x));
}

/// log(sinh(x) / x) in long double; valid for x up to ~11000.
inline long double log_sinh_over_x_ld(long double x) {
  if (x < 1e-2L) {
    const long double x2 = x * x;
    return x2 * (1.0L / 6.0L + x2 * (-1.0L / 180.0L + x2 / 2835.0L));
  }
  if (x > 20.0L) return x - std::log(2.0L * x) + std::log1p(-std::exp(-2.0L * x));
  return std::log(std::sinh(x) / x);
}

/// min over a log-spaced lambda grid of sum log(sinh(l w)/(l w)) - l t.
inline long double grid_min_phi(const std::vector<double>& w, double t, std::size_t points,
                                long double lam_lo, long double lam_hi) {
  const long double a = std::log(lam_lo);
  const long double b = std::log(lam_hi);
  long double best = 0.0L;
  bool first = true;
  for (std::size_t k = 0; k < points; ++k) {
    const long double lam = std::exp(a + (b - a) * static_cast<long double>(k) / (points - 1));
    long double v = -lam * t;
    for (double wi : w) v += log_sinh_over_x_ld(lam * wi);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

/// Smallest t (to abs_tol) with 2 exp(grid_min_phi) <= rho, by bisection on [0, sum w].
inline double grid_chernov_t(const std::vector<double>& w, double rho, std::size_t points,
                             double abs_tol = 1e-7) {
  const double wc = std::accumulate(w.begin(), w.end(), 0.0);
  const double wmin = *std::min_element(w.begin(), w.end());
  const double wmean = wc / static_cast<double>(w.size());
  const long double lam_lo = 1e-6L / wmean;
  const long double lam_hi = 1e5L / wmin;
  const long double target = std::log(static_cast<long double>(rho) / 2.0L);
  double lo = 0.0, hi = wc;
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (grid_min_phi(w, mid, points, lam_lo, lam_hi) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

/// Same protocol for the Lipschitz exponent (phi with S_lambda replaced by
/// lambda sum |w_i - mean|), written out from its closed form.
inline double grid_lipschitz_t(const std::vector<double>& w, double rho, std::size_t points,
                               double abs_tol = 1e-7) {
  const double n = static_cast<double>(w.size());
  const long double mean = std::accumulate(w.begin(), w.end(), 0.0L) / n;
  long double abs_dev = 0.0L;
  for (double wi : w) abs_dev += std::fabs(wi - mean);
  const long double target = std::log(static_cast<long double>(rho) / 2.0L);
  auto min_psi = [&](double t) {
    const long double a = std::log(1e-6L / mean), b = std::log(1e5L / mean);
    long double best = 1e300L;
    for (std::size_t k = 0; k < points; ++k) {
      const long double lam = std::exp(a + (b - a) * static_cast<long double>(k) / (points - 1));
      // n log(sinh(l m)/(l m)) = l n m + n h(2 l m)
      const long double v = n * log_sinh_over_x_ld(lam * mean) + lam * abs_dev - lam * t;
      best = std::min(best, v);
    }
    return best;
  };
  double lo = 0.0, hi = 4.0 * static_cast<double>(mean) * n + 4.0 * static_cast<double>(abs_dev);
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (min_psi(mid) > target) lo = mid; else hi = mid;
  }
  return hi;
}

/// P(|Y| >= t), Y = sum U_i, U_i ~ U[-w_i, w_i], by inclusion-exclusion over
/// the vertices of the box. Exact up to rounding; intended for n <= 6.
inline double uniform_sum_tail(const std::vector<double>& w, double t) {
  const std::size_t n = w.size();
  long double wc = 0.0L, prod = 1.0L, fact = 1.0L;
  for (std::size_t i = 0; i < n; ++i) {
    wc += w[i];
    prod *= 2.0L * w[i];
    fact *= static_cast<long double>(i + 1);
  }
  if (t <= 0.0) return 1.0;
  if (t >= wc) return 0.0;
  // P(Y >= t) = P(Y <= -t) = P(sum a_i V_i <= wc - t), a_i = 2 w_i, V_i ~ U[0,1].
  const long double s = wc - t;
  long double acc = 0.0L;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    long double shift = 0.0L;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        shift += 2.0L * w[i];
        ++bits;
      }
    }
    const long double r = s - shift;
    if (r <= 0.0L) continue;
    const long double term = std::pow(r, static_cast<long double>(n));
    acc += (bits % 2 == 0) ? term : -term;
  }
  return static_cast<double>(2.0L * acc / (fact * prod));
}

/// Geometric route for n = 2: P(X + Y >= s) from the area of the rectangle
/// below the line x + y = s.
inline double two_sum_upper_tail(double a, double b, double s) {
  const double A = 2.0 * a, B = 2.0 * b, sp = s + a + b;
  auto clamp_y = [&](double x) { return std::clamp(sp - x, 0.0, B); };
  // integral over [0, A] of clamp(sp - x, 0, B) dx, split at the kinks
  std::vector<double> knots{0.0, A};
  for (double k : {sp - B, sp}) {
    if (k > 0.0 && k < A) knots.push_back(k);
  }
  std::sort(knots.begin(), knots.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double x0 = knots[i], x1 = knots[i + 1];
    area += 0.5 * (clamp_y(x0) + clamp_y(x1)) * (x1 - x0);  // linear on each piece
  }
  return 1.0 - area / (A * B);
}

/// n = 3 by Simpson integration of the n = 2 geometric tail over U_3.
inline double three_sum_abs_tail(double a, double b, double c, double t, int panels = 200000) {
  auto upper = [&](double s) {
    const double h = 2.0 * c / panels;
    double acc = 0.0;
    for (int k = 0; k <= panels; ++k) {
      const double u = -c + k * h;
      const double wgt = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += wgt * two_sum_upper_tail(a, b, s - u);
    }
    return acc * h / 3.0 / (2.0 * c);
  };
  return 2.0 * upper(t);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

/// Deterministic test generator (xorshift64*), independent of the library RNG.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : s_(seed ? seed : 0x2545F4914F6CDD1DULL) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1DULL;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
  std::uint64_t s_;
};

inline std::vector<double> random_bounds(TestRng& rng, int n, double lo = 1.0, double hi = 5.0) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (auto& x : w) x = rng.uniform(lo, hi);
  return w;
}

inline const std::vector<double>& staircase_chain() {
  static const std::vector<double> w{5, 4, 3, 2, 1};
  return w;
}

inline const std::vector<double>& frame_stack_chain() {
  static const std::vector<double> w{1, .5, .25, .23, .2, .2, .15, .13, .1, .09};
  return w;
}

}  // namespace oracle
