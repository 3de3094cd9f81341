// SPDX-License-Identifier: Apache-2.0

#include "tolstack/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tolstack/bounds.hpp"
#include "tolstack/error.hpp"

namespace tolstack {

namespace {

// Neumaier summation; decimal inputs like 0.09 + ... + 1 come out as the
// double nearest the decimal sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

StackChain::StackChain(std::vector<Contributor> contributors) {
  if (contributors.empty()) throw Error(ErrorCode::EmptyChain, "stack chain has no contributors");

  for (std::size_t i = 0; i < contributors.size(); ++i) {
    const Contributor& c = contributors[i];
    if (c.name.empty()) {
      throw Error(ErrorCode::Validation, "contributor #" + std::to_string(i + 1) + " has no name");
    }
    const std::string label = "'" + c.name + "'";
    if (!(c.half_width > 0.0) || !std::isfinite(c.half_width)) {
      std::ostringstream os;
      os << "contributor " << label << ": tolerance must be positive and finite, got "
         << c.half_width;
      throw Error(ErrorCode::NonPositiveHalfWidth, os.str());
    }
    if (!std::isfinite(c.influence)) {
      throw Error(ErrorCode::Validation, "contributor " + label + ": influence is not finite");
    }
  }

  for (auto& c : contributors) {
    if (c.influence == 0.0) continue;
    weighted_.push_back(std::abs(c.influence) * c.half_width);
    contributors_.push_back(std::move(c));
  }
  if (weighted_.empty()) {
    throw Error(ErrorCode::EmptyChain, "every contributor has zero influence");
  }

  // Sorted accumulation keeps the derived scalars independent of row order.
  sorted_ = weighted_;
  std::sort(sorted_.begin(), sorted_.end());
  const std::vector<double>& sorted = sorted_;
  CompensatedSum sum, sum_sq;
  for (double w : sorted) {
    sum.add(w);
    sum_sq.add(w * w);
  }
  sum_ = sum.value();
  sum_sq_ = sum_sq.value();
  min_ = sorted.front();
  max_ = sorted.back();
  const double n = static_cast<double>(sorted.size());
  mean_ = min_ == max_ ? min_ : sum_ / n;
  for (double w : sorted) {
    const double dev = w - mean_;
    variance_ += dev * dev;
    abs_dev_sum_ += std::abs(dev);
  }
  variance_ /= n;
}

StackChain StackChain::from_bounds(std::span<const double> half_widths) {
  std::vector<Contributor> cs;
  cs.reserve(half_widths.size());
  for (std::size_t i = 0; i < half_widths.size(); ++i) {
    cs.push_back({"x" + std::to_string(i + 1), half_widths[i], 1.0});
  }
  return StackChain(std::move(cs));
}

StackChain build_chain(std::vector<Contributor> contributors) {
  return StackChain(std::move(contributors));
}

double t_wc(const StackChain& chain) { return chain.sum(); }

double t_rss(const StackChain& chain) { return std::sqrt(chain.sum_squares()); }

BalanceReport balance_report(const StackChain& chain) {
  BalanceReport r;
  r.mean = chain.mean();
  r.variance = chain.variance();
  r.abs_dev_sum = chain.abs_dev_sum();
  r.s1 = s_lambda(chain, 1.0);
  r.d_factor = (chain.max_bound() - r.mean) / chain.sum();
  if (r.d_factor < 0.0) r.d_factor = 0.0;  // rounding when all bounds are equal
  return r;
}

}  // namespace tolstack
