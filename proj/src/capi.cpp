// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "tolstack/bounds.hpp"
#include "tolstack/chain.hpp"
#include "tolstack/error.hpp"
#include "tolstack/io.hpp"
#include "tolstack/montecarlo.hpp"
#include "tolstack/study.hpp"
#include "tolstack/tolstack.h"

struct tls_chain {
  tolstack::StackChain chain;
};

struct tls_curve {
  tolstack::BoundCurve curve;
};

struct tls_study {
  std::vector<tolstack::StudyRow> rows;
};

namespace {

using tolstack::Error;
using tolstack::ErrorCode;

thread_local std::string g_last_error;

tls_status fail(tls_status status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

tls_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return TLS_ERR_DOMAIN;
    case ErrorCode::InvalidBracket:
    case ErrorCode::NonFinite:
    case ErrorCode::NoStraddle: return TLS_ERR_NUMERIC;
    case ErrorCode::EmptyChain:
    case ErrorCode::NonPositiveHalfWidth:
    case ErrorCode::Validation: return TLS_ERR_VALIDATION;
    case ErrorCode::Parse: return TLS_ERR_PARSE;
    case ErrorCode::Io: return TLS_ERR_IO;
  }
  return TLS_ERR_INTERNAL;
}

template <class F>
tls_status guarded(F&& body) {
  try {
    body();
    return TLS_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TLS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TLS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TLS_ERR_INTERNAL, "unknown error");
  }
}

#define TLS_REQUIRE(ptr)                                                  \
  do {                                                                    \
    if ((ptr) == nullptr) return fail(TLS_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

bool valid_method(tls_method m) {
  return static_cast<int>(m) >= TLS_METHOD_WC && static_cast<int>(m) <= TLS_METHOD_MONTE_CARLO;
}

tolstack::Method to_cpp(tls_method m) { return static_cast<tolstack::Method>(m); }
tls_method to_c(tolstack::Method m) { return static_cast<tls_method>(m); }

tolstack::BoundOptions to_cpp(const tls_options* o) {
  tolstack::BoundOptions out;
  if (o && o->quadratic_sharp) out.quadratic = tolstack::QuadraticConstant::Sixth;
  return out;
}

tolstack::McConfig to_cpp(const tls_mc_config& c) {
  return tolstack::McConfig{c.draws, c.seed, c.threads};
}

tls_result to_c(const tolstack::ToleranceResult& r) {
  tls_result out{};
  out.method = to_c(r.method);
  out.t = r.t;
  out.t_clamped = r.t_clamped;
  out.f = r.f;
  out.coverage = r.coverage;
  out.has_rho = r.rho.has_value() ? 1 : 0;
  out.rho = r.rho.value_or(std::numeric_limits<double>::quiet_NaN());
  return out;
}

tolstack::ToleranceResult to_cpp(const tls_result& r) {
  tolstack::ToleranceResult out;
  out.method = to_cpp(r.method);
  out.t = r.t;
  out.t_clamped = r.t_clamped;
  out.f = r.f;
  out.coverage = r.coverage;
  if (r.has_rho) out.rho = r.rho;
  return out;
}

tolstack::io::OutputFormat to_cpp(tls_format f) {
  switch (f) {
    case TLS_FORMAT_TABLE: return tolstack::io::OutputFormat::TABLE;
    case TLS_FORMAT_CSV: return tolstack::io::OutputFormat::CSV;
    case TLS_FORMAT_JSON: return tolstack::io::OutputFormat::JSON;
  }
  throw Error(ErrorCode::Domain, "unknown output format");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* tls_version(void) { return "0.1.0"; }

const char* tls_last_error(void) { return g_last_error.c_str(); }

const char* tls_status_name(tls_status status) {
  switch (status) {
    case TLS_OK: return "ok";
    case TLS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TLS_ERR_DOMAIN: return "domain error";
    case TLS_ERR_PARSE: return "parse error";
    case TLS_ERR_VALIDATION: return "validation error";
    case TLS_ERR_IO: return "I/O error";
    case TLS_ERR_NUMERIC: return "numeric failure";
    case TLS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void tls_string_free(char* s) { std::free(s); }

const char* tls_method_name(tls_method method) {
  if (!valid_method(method)) return "?";
  return tolstack::method_name(to_cpp(method)).data();
}

tls_status tls_method_parse(const char* name, tls_method* out) {
  TLS_REQUIRE(name);
  TLS_REQUIRE(out);
  return guarded([&] { *out = to_c(tolstack::parse_method(name)); });
}

tls_status tls_method_list_parse(const char* list, tls_method* out, size_t capacity,
                                 size_t* count) {
  TLS_REQUIRE(list);
  TLS_REQUIRE(out);
  TLS_REQUIRE(count);
  std::vector<tolstack::Method> methods;
  const tls_status st = guarded([&] { methods = tolstack::parse_method_list(list); });
  if (st != TLS_OK) return st;
  if (methods.size() > capacity) return fail(TLS_ERR_INVALID_ARGUMENT, "method buffer too small");
  for (std::size_t i = 0; i < methods.size(); ++i) out[i] = to_c(methods[i]);
  *count = methods.size();
  return TLS_OK;
}

tls_status tls_format_parse(const char* name, tls_format* out) {
  TLS_REQUIRE(name);
  TLS_REQUIRE(out);
  return guarded([&] {
    *out = static_cast<tls_format>(tolstack::io::parse_output_format(name));
  });
}

tls_status tls_chain_create(const char* const* names, const double* half_widths,
                            const double* influences, size_t n, tls_chain** out) {
  TLS_REQUIRE(half_widths);
  TLS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::vector<tolstack::Contributor> cs;
    cs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      tolstack::Contributor c;
      c.name = (names && names[i]) ? names[i] : "x" + std::to_string(i + 1);
      c.half_width = half_widths[i];
      c.influence = influences ? influences[i] : 1.0;
      cs.push_back(std::move(c));
    }
    *out = new tls_chain{tolstack::StackChain(std::move(cs))};
  });
}

tls_status tls_chain_read(const char* path, tls_chain** out) {
  TLS_REQUIRE(path);
  TLS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new tls_chain{tolstack::io::read_chain(path)}; });
}

void tls_chain_destroy(tls_chain* chain) { delete chain; }

size_t tls_chain_size(const tls_chain* chain) { return chain ? chain->chain.size() : 0; }

tls_status tls_chain_weighted_bounds(const tls_chain* chain, double* out, size_t capacity) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(out);
  const auto w = chain->chain.weighted_bounds();
  if (capacity < w.size()) return fail(TLS_ERR_INVALID_ARGUMENT, "buffer too small");
  std::copy(w.begin(), w.end(), out);
  return TLS_OK;
}

tls_status tls_chain_balance(const tls_chain* chain, tls_balance* out) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(out);
  return guarded([&] {
    const auto b = tolstack::balance_report(chain->chain);
    *out = tls_balance{b.mean, b.variance, b.abs_dev_sum, b.s1, b.d_factor};
  });
}

tls_status tls_compute(const tls_chain* chain, tls_method method, double rho,
                       const tls_options* options, tls_result* out) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(out);
  if (!valid_method(method)) return fail(TLS_ERR_INVALID_ARGUMENT, "unknown method");
  return guarded([&] {
    *out = to_c(tolstack::compute(to_cpp(method), chain->chain, tolstack::ConfidenceLevel(rho),
                                  to_cpp(options)));
  });
}

tls_status tls_analyze_all(const tls_chain* chain, double rho, const tls_options* options,
                           tls_result* out) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(out);
  return guarded([&] {
    const auto results =
        tolstack::analyze_all(chain->chain, tolstack::ConfidenceLevel(rho), to_cpp(options));
    for (std::size_t i = 0; i < results.size(); ++i) out[i] = to_c(results[i]);
  });
}

tls_status tls_chernov_prob(const tls_chain* chain, double t, double* out) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(out);
  return guarded([&] { *out = tolstack::chernov_prob(chain->chain, t); });
}

tls_status tls_format_results(const tls_result* results, size_t n, tls_format format, char** out) {
  TLS_REQUIRE(results);
  TLS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::vector<tolstack::ToleranceResult> rs;
    for (size_t i = 0; i < n; ++i) {
      if (!valid_method(results[i].method)) throw Error(ErrorCode::Domain, "unknown method");
      rs.push_back(to_cpp(results[i]));
    }
    std::ostringstream os;
    tolstack::io::write_results(rs, to_cpp(format), os);
    *out = duplicate(os.str());
  });
}

tls_status tls_sweep(const tls_chain* chain, double rho_min, double rho_max, int points,
                     int log_scale, const tls_method* methods, size_t n_methods,
                     const tls_options* options, tls_curve** out) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(out);
  *out = nullptr;
  if (n_methods > 0 && methods == nullptr) return fail(TLS_ERR_INVALID_ARGUMENT, "methods is null");
  return guarded([&] {
    std::vector<tolstack::Method> ms;
    for (size_t i = 0; i < n_methods; ++i) {
      if (!valid_method(methods[i])) throw Error(ErrorCode::Domain, "unknown method");
      ms.push_back(to_cpp(methods[i]));
    }
    if (ms.empty()) ms.assign(tolstack::kAnalyticMethods.begin(), tolstack::kAnalyticMethods.end());
    *out = new tls_curve{tolstack::sweep(chain->chain, rho_min, rho_max, points, log_scale != 0,
                                         ms, to_cpp(options))};
  });
}

void tls_curve_destroy(tls_curve* curve) { delete curve; }

size_t tls_curve_size(const tls_curve* curve) { return curve ? curve->curve.size() : 0; }

tls_status tls_curve_point(const tls_curve* curve, size_t index, double* rho, tls_method* method,
                           double* t) {
  TLS_REQUIRE(curve);
  if (index >= curve->curve.size()) return fail(TLS_ERR_INVALID_ARGUMENT, "index out of range");
  const auto& p = curve->curve[index];
  if (rho) *rho = p.rho;
  if (method) *method = to_c(p.method);
  if (t) *t = p.t;
  return TLS_OK;
}

tls_status tls_format_curve(const tls_curve* curve, tls_format format, char** out) {
  TLS_REQUIRE(curve);
  TLS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::ostringstream os;
    tolstack::io::write_curve(curve->curve, to_cpp(format), os);
    *out = duplicate(os.str());
  });
}

tls_status tls_mc_quantile(const tls_chain* chain, double rho, const tls_mc_config* cfg,
                           double* t_hat, double* std_error) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(cfg);
  TLS_REQUIRE(t_hat);
  return guarded([&] {
    const auto est = tolstack::mc_quantile(chain->chain, tolstack::ConfidenceLevel(rho), to_cpp(*cfg));
    *t_hat = est.value;
    if (std_error) *std_error = est.std_error;
  });
}

tls_status tls_mc_prob(const tls_chain* chain, double t, const tls_mc_config* cfg, double* p_hat,
                       double* std_error) {
  TLS_REQUIRE(chain);
  TLS_REQUIRE(cfg);
  TLS_REQUIRE(p_hat);
  return guarded([&] {
    const auto est = tolstack::mc_prob(chain->chain, t, to_cpp(*cfg));
    *p_hat = est.value;
    if (std_error) *std_error = est.std_error;
  });
}

void tls_study_spec_init(tls_study_spec* spec) {
  if (!spec) return;
  const tolstack::StudySpec d;
  *spec = tls_study_spec{};
  spec->n_inputs = d.n_inputs;
  spec->bound_lo = d.bound_lo;
  spec->bound_hi = d.bound_hi;
  spec->n_chains = d.n_chains;
  spec->rho = d.rho;
  spec->seed = d.seed;
  spec->methods = nullptr;
  spec->n_methods = 0;
  spec->mc_draws = d.mc->draws;
  spec->threads = 1;
}

tls_status tls_study_run(const tls_study_spec* spec, tls_study** out) {
  TLS_REQUIRE(spec);
  TLS_REQUIRE(out);
  *out = nullptr;
  if (spec->n_methods > 0 && spec->methods == nullptr) {
    return fail(TLS_ERR_INVALID_ARGUMENT, "methods is null");
  }
  return guarded([&] {
    tolstack::StudySpec s;
    s.n_inputs = spec->n_inputs;
    s.bound_lo = spec->bound_lo;
    s.bound_hi = spec->bound_hi;
    s.n_chains = spec->n_chains;
    s.rho = spec->rho;
    s.seed = spec->seed;
    if (spec->n_methods > 0) {
      s.methods.clear();
      for (size_t i = 0; i < spec->n_methods; ++i) {
        if (!valid_method(spec->methods[i])) throw Error(ErrorCode::Domain, "unknown method");
        s.methods.push_back(to_cpp(spec->methods[i]));
      }
    }
    if (spec->mc_draws == 0) {
      s.mc.reset();
    } else {
      s.mc = tolstack::McConfig{spec->mc_draws, 0, 1};
    }
    s.threads = spec->threads;
    *out = new tls_study{tolstack::run_study(s)};
  });
}

void tls_study_destroy(tls_study* study) { delete study; }

size_t tls_study_size(const tls_study* study) { return study ? study->rows.size() : 0; }

tls_status tls_study_row(const tls_study* study, size_t index, int* chain_id, double* s1,
                         double* d_factor, double* mc_t) {
  TLS_REQUIRE(study);
  if (index >= study->rows.size()) return fail(TLS_ERR_INVALID_ARGUMENT, "index out of range");
  const auto& r = study->rows[index];
  if (chain_id) *chain_id = r.chain_id;
  if (s1) *s1 = r.s1;
  if (d_factor) *d_factor = r.d_factor;
  if (mc_t) *mc_t = r.mc_t;
  return TLS_OK;
}

tls_status tls_study_value(const tls_study* study, size_t index, tls_method method, double* t,
                           double* f) {
  TLS_REQUIRE(study);
  if (index >= study->rows.size()) return fail(TLS_ERR_INVALID_ARGUMENT, "index out of range");
  if (!valid_method(method)) return fail(TLS_ERR_INVALID_ARGUMENT, "unknown method");
  const auto* v = study->rows[index].find(to_cpp(method));
  if (!v) return fail(TLS_ERR_INVALID_ARGUMENT, "method not part of this study");
  if (t) *t = v->t;
  if (f) *f = v->f;
  return TLS_OK;
}

tls_status tls_format_study(const tls_study* study, tls_format format, char** out) {
  TLS_REQUIRE(study);
  TLS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::ostringstream os;
    tolstack::io::write_study(study->rows, to_cpp(format), os);
    *out = duplicate(os.str());
  });
}

}  // extern "C"
