// SPDX-License-Identifier: Apache-2.0
//
// Stack-chain model: contributors, weighted bounds, classical results and
// balance diagnostics.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace tolstack {

struct Contributor {
  std::string name;
  double half_width = 0.0;  // tolerance bound, the "+/-" magnitude
  double influence = 1.0;   // linear sensitivity of the output
};

/// Immutable assembly model. Weighted bounds are |influence| * half_width;
/// zero-influence rows are dropped at construction.
class StackChain {
public:
  explicit StackChain(std::vector<Contributor> contributors);

  /// Convenience for unit-influence chains.
  static StackChain from_bounds(std::span<const double> half_widths);

  std::span<const Contributor> contributors() const noexcept { return contributors_; }
  std::span<const double> weighted_bounds() const noexcept { return weighted_; }
  /// Weighted bounds in ascending order; reductions run over this view so
  /// results do not depend on row order.
  std::span<const double> sorted_bounds() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return weighted_.size(); }

  double sum() const noexcept { return sum_; }
  double sum_squares() const noexcept { return sum_sq_; }
  double min_bound() const noexcept { return min_; }
  double max_bound() const noexcept { return max_; }
  double mean() const noexcept { return mean_; }
  /// Population variance of the weighted bounds.
  double variance() const noexcept { return variance_; }
  double abs_dev_sum() const noexcept { return abs_dev_sum_; }

private:
  std::vector<Contributor> contributors_;
  std::vector<double> weighted_;
  std::vector<double> sorted_;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double abs_dev_sum_ = 0.0;
};

StackChain build_chain(std::vector<Contributor> contributors);

/// Worst case: sum of weighted bounds.
double t_wc(const StackChain& chain);

/// Root sum of squares of the weighted bounds.
double t_rss(const StackChain& chain);

struct BalanceReport {
  double mean = 0.0;
  double variance = 0.0;     // population convention, divides by n
  double abs_dev_sum = 0.0;  // sum |w_i - mean|
  double s1 = 0.0;           // imbalance functional at lambda = 1
  double d_factor = 0.0;     // (max - mean) / sum
};

BalanceReport balance_report(const StackChain& chain);

}  // namespace tolstack
