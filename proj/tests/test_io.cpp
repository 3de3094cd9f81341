// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <clocale>
#include <cmath>
#include <filesystem>
#include <functional>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tolstack/error.hpp"
#include "tolstack/io.hpp"

using namespace tolstack;

namespace {

const std::filesystem::path kData{TOLSTACK_TEST_DATA};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

TEST_CASE("frame stack CSV and JSON") {
  for (const char* file : {"frame_stack.csv", "frame_stack.json"}) {
    const StackChain c = io::read_chain(kData / file);
    REQUIRE(c.size() == 10);
    CHECK(c.contributors()[0].name == "Frame 1");
    CHECK(c.contributors()[1].name == "Frame 2");
    CHECK(c.contributors()[9].half_width == 0.09);
    CHECK(t_wc(c) == 2.85);
    CHECK(std::abs(t_rss(c) - 1.2259282197584) < 1e-12);
  }
}

TEST_CASE("influence column is optional") {
  const StackChain c = io::read_chain(kData / "staircase.csv");
  REQUIRE(c.size() == 5);
  for (const auto& ct : c.contributors()) CHECK(ct.influence == 1.0);
  CHECK(t_wc(c) == 15.0);

  const StackChain blank = io::parse_chain_csv("name,tolerance,influence\na,2,\nb,1,-3\n");
  CHECK(blank.contributors()[0].influence == 1.0);
  CHECK(blank.weighted_bounds()[1] == 3.0);
}

TEST_CASE("line endings, BOM, quoting, column order") {
  const StackChain c =
      io::parse_chain_csv("\xEF\xBB\xBFtolerance,Name\r\n0.5,\"Frame, left\"\r\n\r\n1,\"say \"\"hi\"\"\"\r\n");
  REQUIRE(c.size() == 2);
  CHECK(c.contributors()[0].name == "Frame, left");
  CHECK(c.contributors()[1].name == "say \"hi\"");
  CHECK(c.contributors()[0].half_width == 0.5);
}

TEST_CASE("validation errors name the contributor") {
  const auto fn = [] { io::read_chain(kData / "zero_tolerance.csv"); };
  CHECK(code_of(fn) == ErrorCode::Validation);
  const std::string msg = message_of(fn);
  CHECK(msg.find("Shim") != std::string::npos);
  CHECK(msg.find(":3") != std::string::npos);

  const auto json_fn = [] {
    io::parse_chain_json(R"({"contributors":[{"name":"a","tolerance":1},{"name":"bad","tolerance":-1}]})");
  };
  CHECK(code_of(json_fn) == ErrorCode::Validation);
  CHECK(message_of(json_fn).find("bad") != std::string::npos);
}

TEST_CASE("parse errors carry line and field") {
  for (const char* cell : {"-1", "+1", "\xC2\xB1" "1", "+/-1", "abc", "1x", ""}) {
    const std::string text = std::string("name,tolerance\na,1\nb,") + cell + "\n";
    INFO(cell);
    CHECK(code_of([&] { io::parse_chain_csv(text, "in.csv"); }) == ErrorCode::Parse);
    const std::string msg = message_of([&] { io::parse_chain_csv(text, "in.csv"); });
    CHECK(msg.find("in.csv:3") != std::string::npos);
    CHECK(msg.find("tolerance") != std::string::npos);
  }
  CHECK(code_of([] { io::parse_chain_csv("name,influence\na,1\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_csv("name,tolerance\na,1,2\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_csv("name,tolerance\n\"a,1\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_csv("name,tolerance,influence\na,1,x\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_csv(""); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_csv("name,tolerance\n"); }) == ErrorCode::Validation);
  CHECK(code_of([] { io::parse_chain_json("{"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_json("[]"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_chain_json(R"({"contributors":[{"name":"a","tolerance":"1"}]})"); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] { io::read_chain(kData / "does_not_exist.csv"); }) == ErrorCode::Io);
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(2.85) == "2.8500000000000001");
  CHECK(io::parse_number(io::format_number(0.1)) == 0.1);
  CHECK(io::format_display(1.2259282197584) == "1.226");
  CHECK(io::format_display(7.416198487095663) == "7.416");
  CHECK(io::parse_number("+1e-3") == 0.001);
  CHECK_THROWS_AS(io::parse_number("1,5"), Error);

  // decimal point regardless of the global C locale
  const char* prev = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = prev ? prev : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::parse_number("0.5") == 0.5);
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("results round-trip") {
  const StackChain c = StackChain::from_bounds(oracle::frame_stack_chain());
  auto results = analyze_all(c, ConfidenceLevel(0.0027));
  results.push_back(airbus_t(c));  // no rho, NaN f
  for (auto fmt : {io::OutputFormat::CSV, io::OutputFormat::JSON}) {
    std::ostringstream os;
    io::write_results(results, fmt, os);
    const auto back = io::read_results(os.str(), fmt);
    REQUIRE(back.size() == results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      CHECK(back[i].method == results[i].method);
      CHECK(back[i].t == results[i].t);
      CHECK(back[i].t_clamped == results[i].t_clamped);
      CHECK(same(back[i].f, results[i].f));
      CHECK(back[i].coverage == results[i].coverage);
      CHECK(back[i].rho == results[i].rho);
    }
  }
  std::ostringstream one;
  io::write_results({results[0]}, io::OutputFormat::CSV, one);
  const std::string one_text = one.str();
  CHECK(std::count(one_text.begin(), one_text.end(), '\n') == 2);
  CHECK_THROWS_AS(io::read_results("x", io::OutputFormat::TABLE), Error);
}

TEST_CASE("table output") {
  const StackChain c = StackChain::from_bounds(oracle::frame_stack_chain());
  std::ostringstream os;
  io::write_results(analyze_all(c, ConfidenceLevel(0.0027)), io::OutputFormat::TABLE, os);
  const std::string s = os.str();
  CHECK(s.find("WC") != std::string::npos);
  CHECK(s.find("2.85") != std::string::npos);
  CHECK(s.find("1.226") != std::string::npos);
}

TEST_CASE("curve round-trip and cardinality") {
  const StackChain c = StackChain::from_bounds(oracle::frame_stack_chain());
  const auto curve = sweep(c, 1e-4, 1e-1, 50, true,
                           {Method::CHERNOV, Method::LIPSCHITZ, Method::QUADRATIC, Method::HOEFFDING});
  std::ostringstream os;
  io::write_curve(curve, io::OutputFormat::CSV, os);
  const std::string text = os.str();
  CHECK(text.rfind("rho,method,t\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 201);
  for (auto fmt : {io::OutputFormat::CSV, io::OutputFormat::JSON}) {
    std::ostringstream out;
    io::write_curve(curve, fmt, out);
    const auto back = io::read_curve(out.str(), fmt);
    REQUIRE(back.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(back[i].rho == curve[i].rho);
      CHECK(back[i].method == curve[i].method);
      CHECK(back[i].t == curve[i].t);
    }
  }
}

TEST_CASE("study round-trip") {
  StudySpec spec;
  spec.n_chains = 6;
  spec.seed = 1;
  spec.mc = McConfig{10000, 0, 1};
  auto rows = run_study(spec);
  for (auto fmt : {io::OutputFormat::CSV, io::OutputFormat::JSON}) {
    std::ostringstream os;
    io::write_study(rows, fmt, os);
    if (fmt == io::OutputFormat::CSV) {
      const std::string head = os.str().substr(0, os.str().find('\n'));
      CHECK(head.rfind("chain_id,s1,d_factor,wc_t,wc_f,rss_t,rss_f,", 0) == 0);
      CHECK(head.size() > 5);
      CHECK(head.substr(head.size() - 5) == ",mc_t");
    }
    const auto back = io::read_study(os.str(), fmt);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].chain_id == rows[i].chain_id);
      CHECK(back[i].s1 == rows[i].s1);
      CHECK(back[i].d_factor == rows[i].d_factor);
      CHECK(back[i].mc_t == rows[i].mc_t);
      REQUIRE(back[i].values.size() == rows[i].values.size());
      for (std::size_t k = 0; k < rows[i].values.size(); ++k) {
        CHECK(back[i].values[k].method == rows[i].values[k].method);
        CHECK(back[i].values[k].t == rows[i].values[k].t);
        CHECK(back[i].values[k].f == rows[i].values[k].f);
      }
    }
  }
}

TEST_CASE("write_file") {
  const auto path = std::filesystem::temp_directory_path() / "tolstack_io_test.txt";
  io::write_file(path, "abc\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "abc");
  std::filesystem::remove(path);
  CHECK(code_of([] { io::write_file("/nonexistent_dir/x/y.csv", "z"); }) == ErrorCode::Io);
}
