// SPDX-License-Identifier: Apache-2.0

#include "tolstack/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "tolstack/error.hpp"
#include "tolstack/random.hpp"

namespace tolstack {

void McConfig::validate() const {
  if (draws < kMinDraws) {
    std::ostringstream os;
    os << "Monte Carlo draws must be >= " << kMinDraws << ", got " << draws;
    throw Error(ErrorCode::Domain, os.str());
  }
  if (draws < kWarnDraws) {
    std::clog << "warning: " << draws << " Monte Carlo draws; estimates will be noisy\n";
  }
}

namespace {

std::vector<double> sample_unchecked(const StackChain& chain, const McConfig& cfg) {
  const auto bounds = chain.weighted_bounds();
  std::vector<CounterStream> streams;
  streams.reserve(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) streams.emplace_back(derive_key(cfg.seed, i));

  std::vector<double> out(cfg.draws);
  auto fill = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t j = begin; j < end; ++j) {
      double y = 0.0;
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        y += bounds[i] * (2.0 * streams[i].uniform(j) - 1.0);
      }
      out[j] = std::abs(y);
    }
  };

  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.draws / 1000 + 1));
  if (threads <= 1) {
    fill(0, cfg.draws);
    return out;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (cfg.draws + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::uint64_t begin = k * chunk;
    const std::uint64_t end = std::min(cfg.draws, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fill, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

std::vector<double> sample_abs_sum(const StackChain& chain, const McConfig& cfg) {
  cfg.validate();
  return sample_unchecked(chain, cfg);
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::Domain, "quantile of empty sample");
  p = std::clamp(p, 0.0, 1.0);
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

McEstimate mc_quantile(const StackChain& chain, const ConfidenceLevel& rho, const McConfig& cfg) {
  std::vector<double> y = sample_abs_sum(chain, cfg);
  std::sort(y.begin(), y.end());

  const double n = static_cast<double>(y.size());
  const double p = 1.0 - rho.value();
  McEstimate est;
  est.value = sorted_quantile(y, p);

  // Density of |Y| at the quantile from a symmetric quantile difference.
  const double delta = std::min(0.5 * rho.value(), std::max(1.0 / std::sqrt(n), 10.0 / n));
  const double p_lo = std::max(0.0, p - delta);
  const double p_hi = std::min(1.0, p + delta);
  const double dq = sorted_quantile(y, p_hi) - sorted_quantile(y, p_lo);
  if (dq > 0.0) {
    const double density = (p_hi - p_lo) / dq;
    est.std_error = std::sqrt(rho.value() * (1.0 - rho.value()) / n) / density;
  }
  return est;
}

McEstimate mc_prob(const StackChain& chain, double t, const McConfig& cfg) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::Domain, "mc_prob: t must be >= 0");
  cfg.validate();
  // |Y| < t_wc almost surely.
  if (t >= t_wc(chain)) return {0.0, 0.0};

  const std::vector<double> y = sample_unchecked(chain, cfg);
  const auto hits = std::count_if(y.begin(), y.end(), [t](double v) { return v >= t; });
  const double n = static_cast<double>(y.size());
  McEstimate est;
  est.value = static_cast<double>(hits) / n;
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / n);
  return est;
}

}  // namespace tolstack
