// SPDX-License-Identifier: Apache-2.0

#include "tolstack/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "tolstack/error.hpp"

namespace tolstack {

StackChain random_chain(int n, double lo, double hi, const CounterStream& stream) {
  if (n < 1) throw Error(ErrorCode::Domain, "random_chain: n must be >= 1");
  if (!(lo > 0.0) || !(lo < hi) || !std::isfinite(hi)) {
    std::ostringstream os;
    os << "random_chain: need 0 < lo < hi, got [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::Domain, os.str());
  }
  std::vector<Contributor> cs;
  cs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = stream.uniform(static_cast<std::uint64_t>(i));
    cs.push_back({"x" + std::to_string(i + 1), lo + (hi - lo) * u, 1.0});
  }
  return StackChain(std::move(cs));
}

void StudySpec::validate() const {
  if (n_inputs < 1) throw Error(ErrorCode::Domain, "study: n_inputs must be >= 1");
  if (!(bound_lo > 0.0) || !(bound_lo < bound_hi)) {
    throw Error(ErrorCode::Domain, "study: need 0 < bound_lo < bound_hi");
  }
  if (n_chains < 1) throw Error(ErrorCode::Domain, "study: n_chains must be >= 1");
  (void)ConfidenceLevel{rho};
  if (methods.empty()) throw Error(ErrorCode::Domain, "study: no methods requested");
  if (std::find(methods.begin(), methods.end(), Method::MONTE_CARLO) != methods.end()) {
    throw Error(ErrorCode::Domain, "study: MC is reported in its own column, not as a method");
  }
  if (mc) mc->validate();
}

const MethodValue* StudyRow::find(Method m) const {
  for (const auto& v : values) {
    if (v.method == m) return &v;
  }
  return nullptr;
}

StackChain study_chain(const StudySpec& spec, int chain_id) {
  const auto id = static_cast<std::uint64_t>(chain_id);
  return random_chain(spec.n_inputs, spec.bound_lo, spec.bound_hi,
                      CounterStream(derive_key(spec.seed, 2 * id)));
}

namespace {

StudyRow study_row(const StudySpec& spec, int chain_id) {
  const StackChain chain = study_chain(spec, chain_id);
  const ConfidenceLevel rho(spec.rho);
  const BalanceReport balance = balance_report(chain);

  StudyRow row;
  row.chain_id = chain_id;
  row.s1 = balance.s1;
  row.d_factor = balance.d_factor;
  for (Method m : spec.methods) {
    const ToleranceResult r = compute(m, chain, rho, spec.options);
    row.values.push_back({m, r.t, r.f});
  }
  if (spec.mc) {
    McConfig cfg = *spec.mc;
    cfg.seed = derive_key(spec.seed, 2 * static_cast<std::uint64_t>(chain_id) + 1);
    cfg.threads = 1;
    row.mc_t = mc_quantile(chain, rho, cfg).value;
  } else {
    row.mc_t = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

}  // namespace

std::vector<StudyRow> run_study(const StudySpec& spec) {
  spec.validate();
  std::vector<StudyRow> rows(static_cast<std::size_t>(spec.n_chains));

  unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.n_chains));
  if (threads <= 1) {
    for (int c = 0; c < spec.n_chains; ++c) rows[static_cast<std::size_t>(c)] = study_row(spec, c);
    return rows;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int c = next++; c < spec.n_chains && !failed; c = next++) {
      try {
        rows[static_cast<std::size_t>(c)] = study_row(spec, c);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace tolstack
