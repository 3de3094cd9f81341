// SPDX-License-Identifier: Apache-2.0
//
// Chain input files and result serialization.
//
// Chain CSV:  header `name,tolerance[,influence]`, one contributor per row.
// Chain JSON: {"contributors": [{"name": ..., "tolerance": ..., "influence": ...}]}
//
// Tolerance cells hold the half-width as a plain unsigned number; signs and
// "+/-" glyphs are rejected. CRLF and LF are accepted, LF is written. All
// numbers are written locale-independently with 17 significant digits.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tolstack/bounds.hpp"
#include "tolstack/chain.hpp"
#include "tolstack/study.hpp"

namespace tolstack::io {

enum class ChainFormat { CSV, JSON };
enum class OutputFormat { TABLE, CSV, JSON };

OutputFormat parse_output_format(std::string_view name);

/// JSON for a ".json" extension (any case), CSV otherwise.
ChainFormat detect_chain_format(const std::filesystem::path& path);

StackChain parse_chain_csv(std::string_view text, std::string_view source = "<csv>");
StackChain parse_chain_json(std::string_view text, std::string_view source = "<json>");
StackChain read_chain(const std::filesystem::path& path);
StackChain read_chain(const std::filesystem::path& path, ChainFormat format);

/// Shortest text with 17 significant digits; "nan"/"inf" never appear in
/// CSV or JSON (missing values are written as empty cells / null).
std::string format_number(double x);
std::string format_display(double x);  // 4 significant digits
double parse_number(std::string_view text);

void write_results(const std::vector<ToleranceResult>& results, OutputFormat format,
                   std::ostream& out);
void write_curve(const BoundCurve& curve, OutputFormat format, std::ostream& out);
void write_study(const std::vector<StudyRow>& rows, OutputFormat format, std::ostream& out);

/// Writes to a file, throwing Error(Io) when it cannot be opened or written.
void write_file(const std::filesystem::path& path, const std::string& contents);

std::vector<ToleranceResult> read_results(std::string_view text, OutputFormat format);
BoundCurve read_curve(std::string_view text, OutputFormat format);
std::vector<StudyRow> read_study(std::string_view text, OutputFormat format);

}  // namespace tolstack::io
