// SPDX-License-Identifier: Apache-2.0

#include "tolstack/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "tolstack/error.hpp"

namespace tolstack::io {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Minimal RFC 4180 reader: quoted fields with "" escapes, no embedded newlines.
std::vector<CsvRecord> split_csv(std::string_view text, std::string_view source) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    CsvRecord rec{line_no, {}};
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && trim(field).empty()) {
        quoted = true;
        was_quoted = true;
        field.clear();
      } else if (c == ',') {
        rec.fields.push_back(was_quoted ? field : std::string(trim(field)));
        field.clear();
        was_quoted = false;
      } else {
        field.push_back(c);
      }
    }
    if (quoted) {
      std::ostringstream os;
      os << source << ":" << line_no << ": unterminated quoted field";
      throw Error(ErrorCode::Parse, os.str());
    }
    rec.fields.push_back(was_quoted ? field : std::string(trim(field)));
    records.push_back(std::move(rec));
  }
  return records;
}

[[noreturn]] void fail_at(ErrorCode code, std::string_view source, std::size_t line,
                          std::string_view column, const std::string& msg) {
  std::ostringstream os;
  os << source << ":" << line;
  if (!column.empty()) os << ", field '" << column << "'";
  os << ": " << msg;
  throw Error(code, os.str());
}

bool try_parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

// Tolerance cells: unsigned decimal only.
bool is_unsigned_number(std::string_view s) {
  if (s.empty()) return false;
  const char c = s.front();
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
}

std::string nullable_number(double x) { return std::isfinite(x) ? format_number(x) : ""; }

json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double json_double(const json& j) {
  if (j.is_null()) return kNaN;
  if (!j.is_number()) throw Error(ErrorCode::Parse, "expected a number, got " + j.dump());
  return j.get<double>();
}

double cell_number(std::string_view cell) {
  if (trim(cell).empty()) return kNaN;
  return parse_number(cell);
}

std::string method_column(Method m, std::string_view suffix) {
  return lower(method_name(m)) + std::string(suffix);
}

void print_table(const std::vector<std::vector<std::string>>& rows, std::ostream& out) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i == 0) {
        out << std::left << std::setw(static_cast<int>(width[i])) << r[i];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[i])) << r[i];
      }
    }
    out << '\n';
  }
}

std::string display_or_dash(double x) { return std::isfinite(x) ? format_display(x) : "-"; }

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  const std::string s = lower(name);
  if (s == "table") return OutputFormat::TABLE;
  if (s == "csv") return OutputFormat::CSV;
  if (s == "json") return OutputFormat::JSON;
  throw Error(ErrorCode::Parse, "unknown output format '" + std::string(name) + "'");
}

ChainFormat detect_chain_format(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".json" ? ChainFormat::JSON : ChainFormat::CSV;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_display(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  if (!try_parse_double(text, v)) {
    throw Error(ErrorCode::Parse, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

StackChain parse_chain_csv(std::string_view text, std::string_view source) {
  const auto records = split_csv(text, source);
  if (records.empty()) fail_at(ErrorCode::Parse, source, 1, "", "empty file");

  const CsvRecord& header = records.front();
  int name_col = -1, tol_col = -1, infl_col = -1;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const std::string h = lower(trim(header.fields[i]));
    if (h == "name") name_col = static_cast<int>(i);
    else if (h == "tolerance") tol_col = static_cast<int>(i);
    else if (h == "influence") infl_col = static_cast<int>(i);
  }
  if (name_col < 0 || tol_col < 0) {
    fail_at(ErrorCode::Parse, source, header.line, "",
            "header must contain 'name' and 'tolerance' columns");
  }

  std::vector<Contributor> cs;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() != header.fields.size()) {
      std::ostringstream os;
      os << "expected " << header.fields.size() << " fields, found " << rec.fields.size();
      fail_at(ErrorCode::Parse, source, rec.line, "", os.str());
    }
    Contributor c;
    c.name = rec.fields[static_cast<std::size_t>(name_col)];
    if (trim(c.name).empty()) fail_at(ErrorCode::Validation, source, rec.line, "name", "empty name");

    const std::string& tol = rec.fields[static_cast<std::size_t>(tol_col)];
    if (!is_unsigned_number(tol) || !try_parse_double(tol, c.half_width)) {
      fail_at(ErrorCode::Parse, source, rec.line, "tolerance",
              "expected an unsigned half-width, got '" + tol + "'");
    }
    if (!(c.half_width > 0.0)) {
      fail_at(ErrorCode::Validation, source, rec.line, "tolerance",
              "contributor '" + c.name + "' has nonpositive tolerance " + tol);
    }
    if (infl_col >= 0) {
      const std::string& infl = rec.fields[static_cast<std::size_t>(infl_col)];
      if (!trim(infl).empty() && !try_parse_double(infl, c.influence)) {
        fail_at(ErrorCode::Parse, source, rec.line, "influence",
                "expected a number, got '" + infl + "'");
      }
    }
    cs.push_back(std::move(c));
  }
  if (cs.empty()) fail_at(ErrorCode::Validation, source, header.line, "", "no contributors");
  try {
    return StackChain(std::move(cs));
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, std::string(source) + ": " + e.what());
  }
}

StackChain parse_chain_json(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << source << ": byte " << e.byte << ": " << e.what();
    throw Error(ErrorCode::Parse, os.str());
  }
  if (!doc.is_object() || !doc.contains("contributors") || !doc["contributors"].is_array()) {
    throw Error(ErrorCode::Parse,
                std::string(source) + ": expected an object with a 'contributors' array");
  }
  std::vector<Contributor> cs;
  const json& arr = doc["contributors"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& item = arr[i];
    std::ostringstream where;
    where << source << ": contributors[" << i << "]";
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string() ||
        !item.contains("tolerance") || !item["tolerance"].is_number()) {
      throw Error(ErrorCode::Parse,
                  where.str() + ": needs a string 'name' and a numeric 'tolerance'");
    }
    Contributor c;
    c.name = item["name"].get<std::string>();
    c.half_width = item["tolerance"].get<double>();
    if (item.contains("influence")) {
      if (!item["influence"].is_number()) {
        throw Error(ErrorCode::Parse, where.str() + ": 'influence' must be a number");
      }
      c.influence = item["influence"].get<double>();
    }
    if (c.name.empty()) throw Error(ErrorCode::Validation, where.str() + ": empty name");
    if (!(c.half_width > 0.0)) {
      throw Error(ErrorCode::Validation, where.str() + ": contributor '" + c.name +
                                             "' has nonpositive tolerance");
    }
    cs.push_back(std::move(c));
  }
  if (cs.empty()) throw Error(ErrorCode::Validation, std::string(source) + ": no contributors");
  try {
    return StackChain(std::move(cs));
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, std::string(source) + ": " + e.what());
  }
}

StackChain read_chain(const std::filesystem::path& path) {
  return read_chain(path, detect_chain_format(path));
}

StackChain read_chain(const std::filesystem::path& path, ChainFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const std::string source = path.string();
  return format == ChainFormat::JSON ? parse_chain_json(text, source)
                                     : parse_chain_csv(text, source);
}

void write_results(const std::vector<ToleranceResult>& results, OutputFormat format,
                   std::ostream& out) {
  switch (format) {
    case OutputFormat::TABLE: {
      std::vector<std::vector<std::string>> rows{{"method", "t", "t_clamped", "f", "coverage", "rho"}};
      for (const auto& r : results) {
        rows.push_back({std::string(method_name(r.method)), format_display(r.t),
                        format_display(r.t_clamped), display_or_dash(r.f),
                        format_display(r.coverage), r.rho ? format_display(*r.rho) : "-"});
      }
      print_table(rows, out);
      break;
    }
    case OutputFormat::CSV:
      out << "method,t,t_clamped,f,coverage,rho\n";
      for (const auto& r : results) {
        out << method_name(r.method) << ',' << format_number(r.t) << ','
            << format_number(r.t_clamped) << ',' << nullable_number(r.f) << ','
            << format_number(r.coverage) << ',' << (r.rho ? format_number(*r.rho) : "") << '\n';
      }
      break;
    case OutputFormat::JSON: {
      json arr = json::array();
      for (const auto& r : results) {
        arr.push_back({{"method", method_name(r.method)},
                       {"t", r.t},
                       {"t_clamped", r.t_clamped},
                       {"f", json_number(r.f)},
                       {"coverage", r.coverage},
                       {"rho", r.rho ? json(*r.rho) : json(nullptr)}});
      }
      out << json{{"results", arr}}.dump(2) << '\n';
      break;
    }
  }
}

void write_curve(const BoundCurve& curve, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::TABLE: {
      std::vector<std::vector<std::string>> rows{{"rho", "method", "t"}};
      for (const auto& p : curve) {
        rows.push_back({format_display(p.rho), std::string(method_name(p.method)),
                        format_display(p.t)});
      }
      print_table(rows, out);
      break;
    }
    case OutputFormat::CSV:
      out << "rho,method,t\n";
      for (const auto& p : curve) {
        out << format_number(p.rho) << ',' << method_name(p.method) << ',' << format_number(p.t)
            << '\n';
      }
      break;
    case OutputFormat::JSON: {
      json arr = json::array();
      for (const auto& p : curve) {
        arr.push_back({{"rho", p.rho}, {"method", method_name(p.method)}, {"t", p.t}});
      }
      out << json{{"curve", arr}}.dump(2) << '\n';
      break;
    }
  }
}

void write_study(const std::vector<StudyRow>& rows, OutputFormat format, std::ostream& out) {
  const std::vector<MethodValue> none;
  const auto& methods = rows.empty() ? none : rows.front().values;
  switch (format) {
    case OutputFormat::TABLE: {
      std::vector<std::vector<std::string>> table;
      std::vector<std::string> head{"chain_id", "s1", "d_factor"};
      for (const auto& v : methods) {
        head.push_back(method_column(v.method, "_t"));
        head.push_back(method_column(v.method, "_f"));
      }
      head.push_back("mc_t");
      table.push_back(head);
      for (const auto& r : rows) {
        std::vector<std::string> line{std::to_string(r.chain_id), format_display(r.s1),
                                      format_display(r.d_factor)};
        for (const auto& v : r.values) {
          line.push_back(format_display(v.t));
          line.push_back(display_or_dash(v.f));
        }
        line.push_back(display_or_dash(r.mc_t));
        table.push_back(line);
      }
      print_table(table, out);
      break;
    }
    case OutputFormat::CSV:
      out << "chain_id,s1,d_factor";
      for (const auto& v : methods) {
        out << ',' << method_column(v.method, "_t") << ',' << method_column(v.method, "_f");
      }
      out << ",mc_t\n";
      for (const auto& r : rows) {
        out << r.chain_id << ',' << format_number(r.s1) << ',' << format_number(r.d_factor);
        for (const auto& v : r.values) out << ',' << format_number(v.t) << ',' << nullable_number(v.f);
        out << ',' << nullable_number(r.mc_t) << '\n';
      }
      break;
    case OutputFormat::JSON: {
      json arr = json::array();
      for (const auto& r : rows) {
        json methods_json = json::object();
        for (const auto& v : r.values) {
          methods_json[std::string(method_name(v.method))] = {{"t", v.t}, {"f", json_number(v.f)}};
        }
        arr.push_back({{"chain_id", r.chain_id},
                       {"s1", r.s1},
                       {"d_factor", r.d_factor},
                       {"methods", methods_json},
                       {"method_order", [&] {
                          json order = json::array();
                          for (const auto& v : r.values) order.push_back(method_name(v.method));
                          return order;
                        }()},
                       {"mc_t", json_number(r.mc_t)}});
      }
      out << json{{"rows", arr}}.dump(2) << '\n';
      break;
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

std::vector<ToleranceResult> read_results(std::string_view text, OutputFormat format) {
  std::vector<ToleranceResult> out;
  auto rho_of = [](double x) { return std::isfinite(x) ? std::optional<double>(x) : std::nullopt; };
  if (format == OutputFormat::CSV) {
    const auto records = split_csv(text, "<results>");
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& f = records[i].fields;
      if (f.size() != 6) fail_at(ErrorCode::Parse, "<results>", records[i].line, "", "expected 6 fields");
      ToleranceResult r;
      r.method = parse_method(f[0]);
      r.t = parse_number(f[1]);
      r.t_clamped = parse_number(f[2]);
      r.f = cell_number(f[3]);
      r.coverage = parse_number(f[4]);
      r.rho = rho_of(cell_number(f[5]));
      out.push_back(r);
    }
    return out;
  }
  if (format == OutputFormat::JSON) {
    try {
      const json doc = json::parse(text.begin(), text.end());
      for (const auto& item : doc.at("results")) {
        ToleranceResult r;
        r.method = parse_method(item.at("method").get<std::string>());
        r.t = json_double(item.at("t"));
        r.t_clamped = json_double(item.at("t_clamped"));
        r.f = json_double(item.at("f"));
        r.coverage = json_double(item.at("coverage"));
        r.rho = rho_of(json_double(item.at("rho")));
        out.push_back(r);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, std::string("results JSON: ") + e.what());
    }
    return out;
  }
  throw Error(ErrorCode::Parse, "table output is not machine-readable");
}

BoundCurve read_curve(std::string_view text, OutputFormat format) {
  BoundCurve out;
  if (format == OutputFormat::CSV) {
    const auto records = split_csv(text, "<curve>");
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& f = records[i].fields;
      if (f.size() != 3) fail_at(ErrorCode::Parse, "<curve>", records[i].line, "", "expected 3 fields");
      out.push_back({parse_number(f[0]), parse_method(f[1]), parse_number(f[2])});
    }
    return out;
  }
  if (format == OutputFormat::JSON) {
    try {
      const json doc = json::parse(text.begin(), text.end());
      for (const auto& item : doc.at("curve")) {
        out.push_back({json_double(item.at("rho")),
                       parse_method(item.at("method").get<std::string>()),
                       json_double(item.at("t"))});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, std::string("curve JSON: ") + e.what());
    }
    return out;
  }
  throw Error(ErrorCode::Parse, "table output is not machine-readable");
}

std::vector<StudyRow> read_study(std::string_view text, OutputFormat format) {
  std::vector<StudyRow> out;
  if (format == OutputFormat::CSV) {
    const auto records = split_csv(text, "<study>");
    if (records.empty()) return out;
    const auto& head = records.front().fields;
    if (head.size() < 4 || (head.size() - 4) % 2 != 0 || head[0] != "chain_id" ||
        head.back() != "mc_t") {
      fail_at(ErrorCode::Parse, "<study>", records.front().line, "", "unexpected study header");
    }
    std::vector<Method> methods;
    for (std::size_t c = 3; c + 1 < head.size(); c += 2) {
      const std::string& col = head[c];
      if (col.size() < 3 || col.substr(col.size() - 2) != "_t") {
        fail_at(ErrorCode::Parse, "<study>", records.front().line, col, "expected <method>_t");
      }
      methods.push_back(parse_method(col.substr(0, col.size() - 2)));
    }
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& f = records[i].fields;
      if (f.size() != head.size()) fail_at(ErrorCode::Parse, "<study>", records[i].line, "", "field count");
      StudyRow r;
      r.chain_id = static_cast<int>(parse_number(f[0]));
      r.s1 = parse_number(f[1]);
      r.d_factor = parse_number(f[2]);
      for (std::size_t m = 0; m < methods.size(); ++m) {
        r.values.push_back({methods[m], parse_number(f[3 + 2 * m]), cell_number(f[4 + 2 * m])});
      }
      r.mc_t = cell_number(f.back());
      out.push_back(std::move(r));
    }
    return out;
  }
  if (format == OutputFormat::JSON) {
    try {
      const json doc = json::parse(text.begin(), text.end());
      for (const auto& item : doc.at("rows")) {
        StudyRow r;
        r.chain_id = item.at("chain_id").get<int>();
        r.s1 = json_double(item.at("s1"));
        r.d_factor = json_double(item.at("d_factor"));
        for (const auto& name : item.at("method_order")) {
          const auto& v = item.at("methods").at(name.get<std::string>());
          r.values.push_back({parse_method(name.get<std::string>()), json_double(v.at("t")),
                              json_double(v.at("f"))});
        }
        r.mc_t = json_double(item.at("mc_t"));
        out.push_back(std::move(r));
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, std::string("study JSON: ") + e.what());
    }
    return out;
  }
  throw Error(ErrorCode::Parse, "table output is not machine-readable");
}

}  // namespace tolstack::io
