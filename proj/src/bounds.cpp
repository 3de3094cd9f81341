// SPDX-License-Identifier: Apache-2.0

#include "tolstack/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "tolstack/error.hpp"
#include "tolstack/numerics.hpp"

namespace tolstack {

using numerics::Bracket;
using numerics::h_stable;
using numerics::log_sinh_over_x;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLog2 = 0.69314718055994530942;

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream os;
    os << "lambda must be positive and finite, got " << lambda;
    throw Error(ErrorCode::Domain, os.str());
  }
}

void require_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << "t must be nonnegative and finite, got " << t;
    throw Error(ErrorCode::Domain, os.str());
  }
}

// min over lambda of a convex exponent, searched on log(lambda). The bracket
// [1e-9/mean, 500/w_min] is widened tenfold (at most three times) while the
// minimum sits on one of its ends.
double min_over_lambda(const StackChain& chain, const std::function<double(double)>& exponent) {
  double lo = 1e-9 / chain.mean();
  double hi = 500.0 / chain.min_bound();
  numerics::Minimum m{};
  for (int widen = 0;; ++widen) {
    m = numerics::minimize_1d(exponent, Bracket(lo, hi), numerics::kLambdaRelTol,
                              numerics::Scale::Log);
    if (widen == 3) break;
    if (m.at_upper) {
      hi *= 10.0;
    } else if (m.at_lower) {
      lo /= 10.0;
    } else {
      break;
    }
  }
  return m.min_value;
}

double clamp_log_prob(double min_exponent) { return std::min(0.0, kLog2 + min_exponent); }

double lipschitz_log_prob(const StackChain& chain, double t) {
  return clamp_log_prob(min_over_lambda(chain, [&](double l) { return psi(chain, l, t); }));
}

double quadratic_log_prob(const StackChain& chain, double t, QuadraticConstant c) {
  return clamp_log_prob(
      min_over_lambda(chain, [&](double l) { return psi_tilde(chain, l, t, c); }));
}

// Smallest t with log_prob(t) <= log(rho), starting from an upper guess that
// is doubled until it satisfies the bound.
double invert_log_prob(const std::function<double(double)>& log_prob, double rho,
                       double upper_guess) {
  const double target = std::log(rho);
  double upper = upper_guess;
  for (int i = 0; i < 64 && log_prob(upper) > target; ++i) upper *= 2.0;
  return numerics::invert_monotone(log_prob, target, Bracket(0.0, upper));
}

double hoeffding_raw(const StackChain& chain, double rho) {
  return std::sqrt(2.0 * std::log(2.0 / rho) * chain.sum_squares());
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::WC: return "WC";
    case Method::RSS: return "RSS";
    case Method::GAUSSIAN: return "GAUSSIAN";
    case Method::HOEFFDING: return "HOEFFDING";
    case Method::CHERNOV: return "CHERNOV";
    case Method::LIPSCHITZ: return "LIPSCHITZ";
    case Method::QUADRATIC: return "QUADRATIC";
    case Method::AIRBUS: return "AIRBUS";
    case Method::MONTE_CARLO: return "MONTE_CARLO";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string up;
  for (char ch : name) {
    if (ch == '-') ch = '_';
    up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  for (Method m : kAnalyticMethods) {
    if (up == method_name(m)) return m;
  }
  if (up == "CHERNOFF") return Method::CHERNOV;
  if (up == "MONTE_CARLO" || up == "MC") return Method::MONTE_CARLO;
  throw Error(ErrorCode::Parse, "unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_method_list(std::string_view list) {
  std::vector<Method> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string_view item = list.substr(pos, comma - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) {
      const Method m = parse_method(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    pos = comma + 1;
  }
  if (out.empty()) out.assign(kAnalyticMethods.begin(), kAnalyticMethods.end());
  return out;
}

ConfidenceLevel::ConfidenceLevel(double rho) : rho_(rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream os;
    os << "confidence level rho must lie in (0, 1), got " << rho;
    throw Error(ErrorCode::Domain, os.str());
  }
}

ToleranceResult make_result(Method method, double t, const StackChain& chain,
                            std::optional<double> rho) {
  const double rss = t_rss(chain);
  ToleranceResult r;
  r.method = method;
  r.t = t;
  r.t_clamped = std::min(t, t_wc(chain));
  r.coverage = t / rss;
  r.rho = rho;
  r.f = rho ? t / (gaussian_l_raw(*rho) * rss) : kNaN;
  return r;
}

double gaussian_l_raw(double rho) {
  if (!(rho > 0.0 && rho <= 2.0)) {
    throw Error(ErrorCode::Domain, "gaussian_l: rho must lie in (0, 2]");
  }
  return std::sqrt(2.0 * std::log(2.0 / rho)) / 3.0;
}

double gaussian_l(const ConfidenceLevel& rho) { return gaussian_l_raw(rho.value()); }

ToleranceResult wc_result(const StackChain& chain, std::optional<double> rho) {
  return make_result(Method::WC, t_wc(chain), chain, rho);
}

ToleranceResult rss_result(const StackChain& chain, std::optional<double> rho) {
  return make_result(Method::RSS, t_rss(chain), chain, rho);
}

ToleranceResult gaussian_t(const StackChain& chain, const ConfidenceLevel& rho) {
  return make_result(Method::GAUSSIAN, gaussian_l(rho) * t_rss(chain), chain, rho.value());
}

ToleranceResult hoeffding_t(const StackChain& chain, const ConfidenceLevel& rho) {
  return make_result(Method::HOEFFDING, hoeffding_raw(chain, rho.value()), chain, rho.value());
}

double phi(const StackChain& chain, double lambda, double t) {
  require_lambda(lambda);
  require_t(t);
  double acc = 0.0;
  for (double w : chain.sorted_bounds()) acc += log_sinh_over_x(lambda * w);
  return acc - lambda * t;
}

double s_lambda(const StackChain& chain, double lambda) {
  require_lambda(lambda);
  const double ref = h_stable(2.0 * lambda * chain.mean());
  double acc = 0.0;
  for (double w : chain.sorted_bounds()) acc += h_stable(2.0 * lambda * w) - ref;
  return std::max(acc, 0.0);
}

// phi = -lambda t + lambda n mean + n h(2 lambda mean) + S_lambda, so each
// relaxation is phi plus (dispersion term - S_lambda). Evaluating it that way
// avoids the cancellation between lambda n mean and n h(2 lambda mean) at
// small lambda. The gap is nonnegative in exact arithmetic; clamping removes
// rounding below zero.
namespace {

double relaxation_gap(const StackChain& chain, double lambda, double dispersion) {
  return std::max(0.0, dispersion - s_lambda(chain, lambda));
}

}  // namespace

double psi(const StackChain& chain, double lambda, double t) {
  const double base = phi(chain, lambda, t);
  return base + relaxation_gap(chain, lambda, lambda * chain.abs_dev_sum());
}

double psi_tilde(const StackChain& chain, double lambda, double t, QuadraticConstant c) {
  const double base = phi(chain, lambda, t);
  const double n = static_cast<double>(chain.size());
  return base + relaxation_gap(chain, lambda,
                               quadratic_constant_value(c) * n * lambda * lambda * chain.variance());
}

double chernov_log_prob(const StackChain& chain, double t) {
  require_t(t);
  if (t >= t_wc(chain)) return -std::numeric_limits<double>::infinity();
  return clamp_log_prob(min_over_lambda(chain, [&](double l) { return phi(chain, l, t); }));
}

double chernov_prob(const StackChain& chain, double t) { return std::exp(chernov_log_prob(chain, t)); }

double lipschitz_prob(const StackChain& chain, double t) {
  require_t(t);
  return std::exp(lipschitz_log_prob(chain, t));
}

double quadratic_prob(const StackChain& chain, double t, QuadraticConstant c) {
  require_t(t);
  return std::exp(quadratic_log_prob(chain, t, c));
}

ToleranceResult chernov_t(const StackChain& chain, const ConfidenceLevel& rho) {
  const double t = numerics::invert_monotone(
      [&](double x) { return chernov_log_prob(chain, x); }, std::log(rho.value()),
      Bracket(0.0, t_wc(chain)));
  return make_result(Method::CHERNOV, t, chain, rho.value());
}

namespace {

// With all bounds equal, S_lambda, the absolute deviations and the variance
// vanish and both relaxations are the Chernoff exponent itself. Reusing its
// inversion keeps the three values identical instead of 1e-10 apart.
bool zero_spread(const StackChain& chain) { return chain.min_bound() == chain.max_bound(); }

ToleranceResult relabeled(ToleranceResult r, Method m) {
  r.method = m;
  return r;
}

}  // namespace

ToleranceResult lipschitz_t(const StackChain& chain, const ConfidenceLevel& rho) {
  if (zero_spread(chain)) return relabeled(chernov_t(chain, rho), Method::LIPSCHITZ);
  const double t = invert_log_prob([&](double x) { return lipschitz_log_prob(chain, x); },
                                   rho.value(), hoeffding_raw(chain, rho.value()));
  return make_result(Method::LIPSCHITZ, t, chain, rho.value());
}

ToleranceResult quadratic_t(const StackChain& chain, const ConfidenceLevel& rho,
                            const BoundOptions& options) {
  if (zero_spread(chain)) return relabeled(chernov_t(chain, rho), Method::QUADRATIC);
  const double t = invert_log_prob(
      [&](double x) { return quadratic_log_prob(chain, x, options.quadratic); }, rho.value(),
      hoeffding_raw(chain, rho.value()));
  return make_result(Method::QUADRATIC, t, chain, rho.value());
}

ToleranceResult airbus_t(const StackChain& chain) {
  const double d = balance_report(chain).d_factor;
  return make_result(Method::AIRBUS, 1.6 * (-0.56 * d + 1.04) * t_rss(chain), chain,
                     std::nullopt);
}

ToleranceResult compute(Method method, const StackChain& chain, const ConfidenceLevel& rho,
                        const BoundOptions& options) {
  switch (method) {
    case Method::WC: return wc_result(chain, rho.value());
    case Method::RSS: return rss_result(chain, rho.value());
    case Method::GAUSSIAN: return gaussian_t(chain, rho);
    case Method::HOEFFDING: return hoeffding_t(chain, rho);
    case Method::CHERNOV: return chernov_t(chain, rho);
    case Method::LIPSCHITZ: return lipschitz_t(chain, rho);
    case Method::QUADRATIC: return quadratic_t(chain, rho, options);
    case Method::AIRBUS: {
      const ToleranceResult r = airbus_t(chain);
      return make_result(Method::AIRBUS, r.t, chain, rho.value());
    }
    case Method::MONTE_CARLO: break;
  }
  throw Error(ErrorCode::Domain, "method " + std::string(method_name(method)) + " is not analytic");
}

std::vector<ToleranceResult> analyze_all(const StackChain& chain, const ConfidenceLevel& rho,
                                         const BoundOptions& options) {
  std::vector<ToleranceResult> out;
  out.reserve(kAnalyticMethods.size());
  for (Method m : kAnalyticMethods) out.push_back(compute(m, chain, rho, options));
  return out;
}

BoundCurve sweep(const StackChain& chain, double rho_min, double rho_max, int points,
                 bool log_scale, const std::vector<Method>& methods,
                 const BoundOptions& options) {
  const ConfidenceLevel lo(rho_min);
  const ConfidenceLevel hi(rho_max);
  if (!(rho_min < rho_max)) throw Error(ErrorCode::Domain, "sweep: rho_min must be < rho_max");
  if (points < 2) throw Error(ErrorCode::Domain, "sweep: points must be >= 2");
  if (methods.empty()) throw Error(ErrorCode::Domain, "sweep: no methods requested");

  BoundCurve curve;
  curve.reserve(static_cast<std::size_t>(points) * methods.size());
  for (int i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(points - 1);
    double rho = log_scale
                     ? std::exp(std::log(lo.value()) + s * (std::log(hi.value()) - std::log(lo.value())))
                     : lo.value() + s * (hi.value() - lo.value());
    if (i == 0) rho = lo.value();
    if (i == points - 1) rho = hi.value();
    const ConfidenceLevel level(rho);
    for (Method m : methods) curve.push_back({rho, m, compute(m, chain, level, options).t});
  }
  return curve;
}

}  // namespace tolstack
