// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tolstack/error.hpp"
#include "tolstack/study.hpp"

using namespace tolstack;

namespace {

bool same_rows(const std::vector<StudyRow>& a, const std::vector<StudyRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].chain_id != b[i].chain_id || a[i].s1 != b[i].s1 || a[i].d_factor != b[i].d_factor) return false;
    if (!(a[i].mc_t == b[i].mc_t || (std::isnan(a[i].mc_t) && std::isnan(b[i].mc_t)))) return false;
    if (a[i].values.size() != b[i].values.size()) return false;
    for (std::size_t k = 0; k < a[i].values.size(); ++k) {
      if (a[i].values[k].method != b[i].values[k].method || a[i].values[k].t != b[i].values[k].t ||
          a[i].values[k].f != b[i].values[k].f)
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("random_chain") {
  const CounterStream s(derive_key(11, 0));
  const StackChain c = random_chain(5, 1.0, 1.0 + 1e-9, s);
  REQUIRE(c.size() == 5);
  for (double w : c.weighted_bounds()) {
    CHECK(w >= 1.0);
    CHECK(w <= 1.0 + 1e-9);
  }
  const StackChain a = random_chain(5, 1.0, 5.0, s);
  const StackChain b = random_chain(5, 1.0, 5.0, s);
  CHECK(std::vector<double>(a.weighted_bounds().begin(), a.weighted_bounds().end()) ==
        std::vector<double>(b.weighted_bounds().begin(), b.weighted_bounds().end()));
  for (const auto& ct : a.contributors()) CHECK(ct.influence == 1.0);

  double sum = 0.0;
  int count = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const StackChain c = random_chain(5, 1.0, 5.0, CounterStream(derive_key(99, k)));
    for (double w : c.weighted_bounds()) {
      sum += w;
      ++count;
    }
  }
  const double mean = sum / count;
  CHECK(mean >= 2.97);
  CHECK(mean <= 3.03);

  CHECK_THROWS_AS(random_chain(5, 2.0, 2.0, s), Error);
  CHECK_THROWS_AS(random_chain(5, 0.0, 2.0, s), Error);
  CHECK_THROWS_AS(random_chain(0, 1.0, 2.0, s), Error);
}

TEST_CASE("study spec validation") {
  StudySpec spec;
  spec.n_chains = 0;
  CHECK_THROWS_AS(run_study(spec), Error);
  spec = {};
  spec.rho = 1.0;
  CHECK_THROWS_AS(run_study(spec), Error);
  spec = {};
  spec.bound_lo = 5.0;
  CHECK_THROWS_AS(run_study(spec), Error);
  spec = {};
  spec.methods = {Method::MONTE_CARLO};
  CHECK_THROWS_AS(run_study(spec), Error);
  spec = {};
  spec.mc = McConfig{10, 0, 1};
  CHECK_THROWS_AS(run_study(spec), Error);
}

TEST_CASE("run_study rows") {
  StudySpec spec;
  spec.n_chains = 40;
  spec.seed = 2024;
  spec.mc = McConfig{20000, 0, 1};
  const auto rows = run_study(spec);
  REQUIRE(rows.size() == 40);
  const double l = gaussian_l(ConfidenceLevel(spec.rho));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const StudyRow& r = rows[i];
    CHECK(r.chain_id == static_cast<int>(i));
    CHECK(std::isfinite(r.s1));
    CHECK(std::isfinite(r.d_factor));
    CHECK(std::isfinite(r.mc_t));
    REQUIRE(r.values.size() == 8);
    const StackChain c = study_chain(spec, r.chain_id);
    CHECK(r.s1 == balance_report(c).s1);
    for (const auto& v : r.values) {
      CHECK(std::isfinite(v.t));
      CHECK(v.f == doctest::Approx(v.t / (l * t_rss(c))).epsilon(1e-14));
    }
    const double fc = r.find(Method::CHERNOV)->f;
    CHECK(fc <= r.find(Method::LIPSCHITZ)->f);
    CHECK(fc <= r.find(Method::QUADRATIC)->f);
    CHECK(fc <= 3.0);
    CHECK(r.mc_t <= r.find(Method::CHERNOV)->t);
  }
  CHECK(rows[0].find(Method::MONTE_CARLO) == nullptr);
}

TEST_CASE("study determinism across runs and threads") {
  StudySpec spec;
  spec.n_chains = 24;
  spec.seed = 5;
  spec.mc = McConfig{10000, 0, 1};
  const auto a = run_study(spec);
  const auto b = run_study(spec);
  spec.threads = 4;
  const auto p = run_study(spec);
  spec.threads = 0;
  const auto z = run_study(spec);
  CHECK(same_rows(a, b));
  CHECK(same_rows(a, p));
  CHECK(same_rows(a, z));
  spec.seed = 6;
  CHECK(!same_rows(a, run_study(spec)));
}

TEST_CASE("study without MC and with a method subset") {
  StudySpec spec;
  spec.n_chains = 3;
  spec.mc.reset();
  spec.methods = {Method::CHERNOV, Method::WC};
  const auto rows = run_study(spec);
  REQUIRE(rows.size() == 3);
  CHECK(std::isnan(rows[0].mc_t));
  REQUIRE(rows[0].values.size() == 2);
  CHECK(rows[0].values[0].method == Method::CHERNOV);
  CHECK(rows[0].values[1].method == Method::WC);
}

TEST_CASE("equal chain collapses in f") {
  const StackChain c = StackChain::from_bounds(std::vector<double>(5, 2.5));
  const ConfidenceLevel rho(0.05);
  const double fc = chernov_t(c, rho).f;
  CHECK(lipschitz_t(c, rho).f == doctest::Approx(fc).epsilon(1e-8));
  CHECK(quadratic_t(c, rho).f == doctest::Approx(fc).epsilon(1e-8));
  CHECK(balance_report(c).s1 == 0.0);
  CHECK(balance_report(c).d_factor == 0.0);
}
