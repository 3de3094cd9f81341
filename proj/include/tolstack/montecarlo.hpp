// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo oracle for Y = sum U_i, U_i ~ U[-w_i, w_i].

#pragma once

#include <cstdint>
#include <vector>

#include "tolstack/bounds.hpp"
#include "tolstack/chain.hpp"

namespace tolstack {

struct McConfig {
  std::uint64_t draws = 200000;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 means hardware concurrency; output does not depend on it

  void validate() const;
};

inline constexpr std::uint64_t kMinDraws = 1000;
inline constexpr std::uint64_t kWarnDraws = 10000;

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Draws |Y| for every sample. Sample j of contributor i uses counter j of
/// the substream derive_key(seed, i).
std::vector<double> sample_abs_sum(const StackChain& chain, const McConfig& cfg);

/// Type-7 interpolated quantile of already sorted data, p in [0, 1].
double sorted_quantile(const std::vector<double>& sorted, double p);

/// Empirical (1 - rho) quantile of |Y| with its asymptotic standard error.
McEstimate mc_quantile(const StackChain& chain, const ConfidenceLevel& rho, const McConfig& cfg);

/// Fraction of samples with |Y| >= t and its binomial standard error.
McEstimate mc_prob(const StackChain& chain, double t, const McConfig& cfg);

}  // namespace tolstack
