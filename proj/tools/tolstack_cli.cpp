// SPDX-License-Identifier: Apache-2.0
//
// tolstack command-line front end. Talks to the library only through the
// C interface in tolstack/tolstack.h.
//
// Exit status: 0 success, 1 numeric failure, 2 input error.

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tolstack/tolstack.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;

struct Failure {
  int exit_code;
};

int exit_code_for(tls_status st) {
  return (st == TLS_ERR_NUMERIC || st == TLS_ERR_INTERNAL) ? kExitNumeric : kExitInput;
}

void check(tls_status st) {
  if (st == TLS_OK) return;
  std::cerr << "error: " << tls_last_error() << "\n";
  throw Failure{exit_code_for(st)};
}

[[noreturn]] void input_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  throw Failure{kExitInput};
}

std::string number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

struct ChainDeleter {
  void operator()(tls_chain* c) const { tls_chain_destroy(c); }
};
struct CurveDeleter {
  void operator()(tls_curve* c) const { tls_curve_destroy(c); }
};
struct StudyDeleter {
  void operator()(tls_study* s) const { tls_study_destroy(s); }
};
struct StringDeleter {
  void operator()(char* s) const { tls_string_free(s); }
};
using ChainPtr = std::unique_ptr<tls_chain, ChainDeleter>;
using CurvePtr = std::unique_ptr<tls_curve, CurveDeleter>;
using StudyPtr = std::unique_ptr<tls_study, StudyDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

ChainPtr load_chain(const std::string& path) {
  tls_chain* raw = nullptr;
  check(tls_chain_read(path.c_str(), &raw));
  return ChainPtr(raw);
}

std::vector<tls_method> methods_from(const std::string& list) {
  std::vector<tls_method> out(16);
  std::size_t count = 0;
  check(tls_method_list_parse(list.c_str(), out.data(), out.size(), &count));
  out.resize(count);
  for (tls_method m : out) {
    if (m == TLS_METHOD_MONTE_CARLO) input_error("MC is not an analytic method; use the mc command");
  }
  return out;
}

tls_format format_from(const std::string& name) {
  tls_format f{};
  check(tls_format_parse(name.c_str(), &f));
  return f;
}

void check_rho(double rho, const char* flag) {
  if (!(rho > 0.0 && rho < 1.0)) input_error(std::string(flag) + " must lie in (0, 1)");
}

struct AnalyzeArgs {
  std::string file;
  double rho = 0.0027;
  std::string methods;
  std::string format = "table";
  bool sharp = false;
};

int run_analyze(const AnalyzeArgs& a) {
  check_rho(a.rho, "--rho");
  const tls_format fmt = format_from(a.format);
  const auto methods = methods_from(a.methods);
  const ChainPtr chain = load_chain(a.file);
  const tls_options opts{a.sharp ? 1 : 0};

  std::vector<tls_result> results(methods.size());
  for (std::size_t i = 0; i < methods.size(); ++i) {
    check(tls_compute(chain.get(), methods[i], a.rho, &opts, &results[i]));
  }
  char* text = nullptr;
  check(tls_format_results(results.data(), results.size(), fmt, &text));
  OwnedString owned(text);
  std::cout << owned.get();
  return kExitOk;
}

struct SweepArgs {
  std::string file;
  double rho_min = 0.0;
  double rho_max = 0.0;
  int points = 0;
  bool linear = false;
  std::string methods;
  std::string format = "csv";
  bool sharp = false;
};

int run_sweep(const SweepArgs& a) {
  check_rho(a.rho_min, "--rho-min");
  check_rho(a.rho_max, "--rho-max");
  if (!(a.rho_min < a.rho_max)) input_error("--rho-min must be smaller than --rho-max");
  if (a.points < 2) input_error("--points must be >= 2");
  const tls_format fmt = format_from(a.format);
  const auto methods = methods_from(a.methods);
  const ChainPtr chain = load_chain(a.file);
  const tls_options opts{a.sharp ? 1 : 0};

  tls_curve* raw = nullptr;
  check(tls_sweep(chain.get(), a.rho_min, a.rho_max, a.points, a.linear ? 0 : 1, methods.data(),
                  methods.size(), &opts, &raw));
  const CurvePtr curve(raw);
  char* text = nullptr;
  check(tls_format_curve(curve.get(), fmt, &text));
  OwnedString owned(text);
  std::cout << owned.get();
  return kExitOk;
}

struct StudyArgs {
  int n = 5;
  double lo = 1.0;
  double hi = 5.0;
  int chains = 0;
  double rho = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t mc_draws = 200000;
  std::string methods;
  std::string format = "csv";
  std::string out;
  unsigned threads = 1;
};

int run_study(const StudyArgs& a) {
  check_rho(a.rho, "--rho");
  if (a.mc_draws != 0 && a.mc_draws < 1000) input_error("--mc-draws must be 0 or >= 1000");
  const tls_format fmt = format_from(a.format);
  const auto methods = methods_from(a.methods);

  tls_study_spec spec;
  tls_study_spec_init(&spec);
  spec.n_inputs = a.n;
  spec.bound_lo = a.lo;
  spec.bound_hi = a.hi;
  spec.n_chains = a.chains;
  spec.rho = a.rho;
  spec.seed = a.seed;
  spec.methods = methods.data();
  spec.n_methods = methods.size();
  spec.mc_draws = a.mc_draws;
  spec.threads = a.threads;

  tls_study* raw = nullptr;
  check(tls_study_run(&spec, &raw));
  const StudyPtr study(raw);
  char* text = nullptr;
  check(tls_format_study(study.get(), fmt, &text));
  OwnedString owned(text);

  if (a.out == "-") {
    std::cout << owned.get();
    return kExitOk;
  }
  std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
  if (!file) input_error("cannot open '" + a.out + "' for writing");
  file << owned.get();
  file.flush();
  if (!file) input_error("failed writing '" + a.out + "'");
  return kExitOk;
}

struct McArgs {
  std::string file;
  std::optional<double> rho;
  std::optional<double> t;
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int run_mc(const McArgs& a) {
  if (a.rho) check_rho(*a.rho, "--rho");
  if (a.t && !(*a.t >= 0.0)) input_error("--t must be >= 0");
  if (a.draws < 1000) input_error("--draws must be >= 1000");
  const ChainPtr chain = load_chain(a.file);
  const tls_mc_config cfg{a.draws, a.seed, a.threads};

  double value = 0.0;
  double se = 0.0;
  if (a.rho) {
    check(tls_mc_quantile(chain.get(), *a.rho, &cfg, &value, &se));
    std::cout << "rho,t_hat,stderr\n" << number(*a.rho) << ',' << number(value) << ',' << number(se) << '\n';
  } else {
    check(tls_mc_prob(chain.get(), *a.t, &cfg, &value, &se));
    std::cout << "t,p_hat,stderr\n" << number(*a.t) << ',' << number(value) << ',' << number(se) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tolstack: tolerance stack-up analysis for uniform contributors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tls_version()));

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Tolerance intervals of a chain by every method");
  cmd_analyze->add_option("file", analyze.file, "Chain file (.csv or .json)")->required();
  cmd_analyze->add_option("--rho", analyze.rho, "Two-sided out-of-tolerance probability")
      ->capture_default_str();
  cmd_analyze->add_option("--methods", analyze.methods, "Comma-separated methods (default: all)");
  cmd_analyze->add_option("--format", analyze.format, "table, csv or json")->capture_default_str();
  cmd_analyze->add_flag("--sharp-quadratic", analyze.sharp,
                        "Use the 1/6 variance constant for the quadratic bound");

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "Half-width as a function of rho (plot-ready CSV)");
  cmd_sweep->add_option("file", sweep.file, "Chain file (.csv or .json)")->required();
  cmd_sweep->add_option("--rho-min", sweep.rho_min, "Smallest rho")->required();
  cmd_sweep->add_option("--rho-max", sweep.rho_max, "Largest rho")->required();
  cmd_sweep->add_option("--points", sweep.points, "Number of rho values (>= 2)")->required();
  cmd_sweep->add_flag("--linear", sweep.linear, "Linear rho grid instead of log-spaced");
  cmd_sweep->add_option("--methods", sweep.methods, "Comma-separated methods (default: all)");
  cmd_sweep->add_option("--format", sweep.format, "csv, json or table")->capture_default_str();
  cmd_sweep->add_flag("--sharp-quadratic", sweep.sharp,
                      "Use the 1/6 variance constant for the quadratic bound");

  StudyArgs study;
  auto* cmd_study = app.add_subcommand("study", "Batch study over random stack chains");
  cmd_study->add_option("--n", study.n, "Contributors per chain")->capture_default_str();
  cmd_study->add_option("--lo", study.lo, "Lower end of the half-width range")->capture_default_str();
  cmd_study->add_option("--hi", study.hi, "Upper end of the half-width range")->capture_default_str();
  cmd_study->add_option("--chains", study.chains, "Number of random chains")->required();
  cmd_study->add_option("--rho", study.rho, "Two-sided out-of-tolerance probability")->required();
  cmd_study->add_option("--seed", study.seed, "Random seed")->required();
  cmd_study->add_option("--mc-draws", study.mc_draws, "Monte Carlo draws per chain (0 disables)")
      ->capture_default_str();
  cmd_study->add_option("--methods", study.methods, "Comma-separated methods (default: all)");
  cmd_study->add_option("--format", study.format, "csv, json or table")->capture_default_str();
  cmd_study->add_option("--threads", study.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  cmd_study->add_option("-o,--output", study.out, "Output path ('-' for stdout)")->required();

  McArgs mc;
  auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo quantile or exceedance probability");
  cmd_mc->add_option("file", mc.file, "Chain file (.csv or .json)")->required();
  auto* mc_rho = cmd_mc->add_option("--rho", mc.rho, "Estimate the (1 - rho) quantile of |Y|");
  auto* mc_t = cmd_mc->add_option("--t", mc.t, "Estimate P(|Y| >= t)");
  mc_rho->excludes(mc_t);
  cmd_mc->add_option("--draws", mc.draws, "Number of samples")->required();
  cmd_mc->add_option("--seed", mc.seed, "Random seed")->required();
  cmd_mc->add_option("--threads", mc.threads, "Worker threads (0: all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (cmd_mc->parsed() && !mc.rho && !mc.t) {
      throw CLI::RequiredError("exactly one of --rho or --t");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (cmd_analyze->parsed()) return run_analyze(analyze);
    if (cmd_sweep->parsed()) return run_sweep(sweep);
    if (cmd_study->parsed()) return run_study(study);
    if (cmd_mc->parsed()) return run_mc(mc);
  } catch (const Failure& f) {
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
