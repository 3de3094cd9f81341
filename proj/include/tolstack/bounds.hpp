// SPDX-License-Identifier: Apache-2.0
//
// Analytic tolerance-interval methods for sums of independent centered
// uniforms U_i ~ U[-w_i, w_i].
//
// Every Chernoff-family method bounds P(|Y| >= t) by 2 exp(min_lambda E(lambda, t))
// for an exponent E that is convex in lambda:
//
//   CHERNOV    E = phi       = sum log(sinh(lambda w_i) / (lambda w_i)) - lambda t
//   LIPSCHITZ  E = psi       = phi with S_lambda replaced by lambda sum |w_i - mean|
//   QUADRATIC  E = psi_tilde = phi with S_lambda replaced by c n lambda^2 Var(w)
//
// and reports the smallest t for which the bound reaches rho. phi <= psi and
// phi <= psi_tilde pointwise, so CHERNOV is always the tightest of the three.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tolstack/chain.hpp"

namespace tolstack {

enum class Method {
  WC,
  RSS,
  GAUSSIAN,
  HOEFFDING,
  CHERNOV,
  LIPSCHITZ,
  QUADRATIC,
  AIRBUS,
  MONTE_CARLO,
};

/// The eight analytic methods, in reporting order.
inline constexpr std::array<Method, 8> kAnalyticMethods = {
    Method::WC,        Method::RSS,       Method::GAUSSIAN,  Method::HOEFFDING,
    Method::CHERNOV,   Method::LIPSCHITZ, Method::QUADRATIC, Method::AIRBUS,
};

std::string_view method_name(Method m);
/// Case-insensitive; throws Error(Parse) on unknown names.
Method parse_method(std::string_view name);
/// Comma-separated list; empty input means all analytic methods.
std::vector<Method> parse_method_list(std::string_view list);

/// Two-sided out-of-tolerance probability, strictly inside (0, 1).
class ConfidenceLevel {
public:
  explicit ConfidenceLevel(double rho);
  double value() const noexcept { return rho_; }

private:
  double rho_;
};

struct ToleranceResult {
  Method method = Method::WC;
  double t = 0.0;          // raw half-width
  double t_clamped = 0.0;  // min(t, worst case)
  double f = 0.0;          // t / (l_rho * T_RSS); NaN without rho
  double coverage = 0.0;   // t / T_RSS
  std::optional<double> rho;
};

/// Constant c of the variance relaxation S_lambda <= c n lambda^2 Var(w).
enum class QuadraticConstant { Half, Sixth };

inline constexpr double quadratic_constant_value(QuadraticConstant c) {
  return c == QuadraticConstant::Half ? 0.5 : 1.0 / 6.0;
}

struct BoundOptions {
  QuadraticConstant quadratic = QuadraticConstant::Half;
};

ToleranceResult make_result(Method method, double t, const StackChain& chain,
                            std::optional<double> rho);

/// Gaussian deviation quantile factor (1/3) sqrt(2 log(2 / rho)).
double gaussian_l(const ConfidenceLevel& rho);
/// Unchecked variant used by the analytic limit rho = 1; requires 0 < rho <= 2.
double gaussian_l_raw(double rho);

ToleranceResult wc_result(const StackChain& chain, std::optional<double> rho = {});
ToleranceResult rss_result(const StackChain& chain, std::optional<double> rho = {});
ToleranceResult gaussian_t(const StackChain& chain, const ConfidenceLevel& rho);
ToleranceResult hoeffding_t(const StackChain& chain, const ConfidenceLevel& rho);

double phi(const StackChain& chain, double lambda, double t);
double s_lambda(const StackChain& chain, double lambda);
double psi(const StackChain& chain, double lambda, double t);
double psi_tilde(const StackChain& chain, double lambda, double t,
                 QuadraticConstant c = QuadraticConstant::Half);

/// log of min(1, 2 exp(min_lambda phi(lambda, t))); -inf once t >= t_wc.
double chernov_log_prob(const StackChain& chain, double t);
double chernov_prob(const StackChain& chain, double t);
double lipschitz_prob(const StackChain& chain, double t);
double quadratic_prob(const StackChain& chain, double t,
                      QuadraticConstant c = QuadraticConstant::Half);

ToleranceResult chernov_t(const StackChain& chain, const ConfidenceLevel& rho);
ToleranceResult lipschitz_t(const StackChain& chain, const ConfidenceLevel& rho);
ToleranceResult quadratic_t(const StackChain& chain, const ConfidenceLevel& rho,
                            const BoundOptions& options = {});
ToleranceResult airbus_t(const StackChain& chain);

/// Dispatch on method; MONTE_CARLO is not analytic and throws Error(Domain).
ToleranceResult compute(Method method, const StackChain& chain, const ConfidenceLevel& rho,
                        const BoundOptions& options = {});

/// All eight analytic methods at rho, in kAnalyticMethods order.
std::vector<ToleranceResult> analyze_all(const StackChain& chain, const ConfidenceLevel& rho,
                                         const BoundOptions& options = {});

struct CurvePoint {
  double rho = 0.0;
  Method method = Method::WC;
  double t = 0.0;
};
using BoundCurve = std::vector<CurvePoint>;

/// Evaluates each method on `points` rho values between rho_min and rho_max.
/// Rows are grouped by rho (ascending), methods in the given order.
BoundCurve sweep(const StackChain& chain, double rho_min, double rho_max, int points,
                 bool log_scale, const std::vector<Method>& methods,
                 const BoundOptions& options = {});

}  // namespace tolstack
