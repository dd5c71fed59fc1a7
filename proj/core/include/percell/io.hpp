// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Small deterministic text-output helpers shared by the benchmark drivers
// and the command-line tool: number formatting, CSV assembly, plain-text
// key=value configuration echo, and file I/O.

#ifndef PERCELL_IO_HPP
#define PERCELL_IO_HPP

#include <string>
#include <utility>
#include <vector>

namespace percell {

/// Fixed-point formatting with the given digit count ("%.*f").
std::string format_fixed(double x, int digits);

/// Scientific formatting ("%.*e").
std::string format_sci(double x, int digits);

/// Shortest round-trip representation ("%.17g").
std::string format_full(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Serializes the table: comma-joined cells, one '\n' per line. Cells
/// containing commas, quotes, or newlines are quoted with doubled quotes.
std::string to_csv(const CsvTable& table);

/// Ordered key=value pairs (insertion order preserved).
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Renders one `key=value` line per entry, newline-terminated.
std::string config_echo(const KeyValues& kv);

/// Parses `key=value` lines; '#' starts a comment, blank lines are skipped,
/// surrounding whitespace is trimmed. Later keys override earlier ones in
/// lookup but the full ordered list is returned.
KeyValues parse_key_values(const std::string& text);

/// Last value for `key`, or `fallback` when absent.
std::string lookup(const KeyValues& kv, const std::string& key,
                   const std::string& fallback = "");

/// Writes the whole file, creating parent directories; throws
/// std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& content);

/// Reads the whole file; throws std::runtime_error on failure.
std::string read_text_file(const std::string& path);

}  // namespace percell

#endif  // PERCELL_IO_HPP
