// SPDX-License-Identifier: Apache-2.0
//
// Random stack chains and batch studies of f against the balance indicators.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tolstack/bounds.hpp"
#include "tolstack/chain.hpp"
#include "tolstack/montecarlo.hpp"
#include "tolstack/random.hpp"

namespace tolstack {

/// n unit-influence contributors with half-widths i.i.d. U[lo, hi] taken
/// from counters 0..n-1 of the stream.
StackChain random_chain(int n, double lo, double hi, const CounterStream& stream);

struct StudySpec {
  int n_inputs = 5;
  double bound_lo = 1.0;
  double bound_hi = 5.0;
  int n_chains = 100;
  double rho = 0.05;
  std::uint64_t seed = 0;
  std::vector<Method> methods{kAnalyticMethods.begin(), kAnalyticMethods.end()};
  std::optional<McConfig> mc = McConfig{};  // nullopt disables the MC column
  unsigned threads = 1;                     // chains processed in parallel; output unchanged
  BoundOptions options{};

  void validate() const;
};

struct MethodValue {
  Method method;
  double t;
  double f;
};

struct StudyRow {
  int chain_id = 0;
  double s1 = 0.0;
  double d_factor = 0.0;
  std::vector<MethodValue> values;  // in StudySpec::methods order
  double mc_t = 0.0;                // NaN when MC is disabled

  const MethodValue* find(Method m) const;
};

/// Chain c uses stream derive_key(seed, 2c) for its bounds and seed
/// derive_key(seed, 2c + 1) for its MC draws.
StackChain study_chain(const StudySpec& spec, int chain_id);

std::vector<StudyRow> run_study(const StudySpec& spec);

}  // namespace tolstack
