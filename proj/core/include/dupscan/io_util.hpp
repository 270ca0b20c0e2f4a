// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dupscan {

/// Unrecoverable data problem (missing file, inconsistent schema, ...).
/// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// --- timestamps -------------------------------------------------------------
// Wire format is "YYYY-MM-DDTHH:MM:SSZ" (UTC, second resolution). Internally
// timestamps are seconds since the Unix epoch. Valid range: [1970-01-01,
// 2100-01-01).

inline constexpr std::int64_t kTimestampMin = 0;
inline constexpr std::int64_t kTimestampMax = 4102444800;  // 2100-01-01T00:00:00Z

std::optional<std::int64_t> parse_timestamp(std::string_view s);
std::string format_timestamp(std::int64_t epoch_seconds);

/// Days since 1970-01-01 -> "YYYY-MM-DD".
std::string format_date(std::int64_t day_index);
std::optional<std::int64_t> parse_date(std::string_view s);

// --- utf-8 ------------------------------------------------------------------
// Invalid byte sequences decode to U+FFFD so text handling stays total.

std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(const std::u32string& s);

// --- small text helpers -----------------------------------------------------

std::string ascii_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Whitespace-delimited tokens of an already-normalized string.
std::vector<std::string_view> split_ws(std::string_view s);

/// One CSV record with minimal RFC 4180 quoting ("" escapes a quote).
std::vector<std::string> split_csv(std::string_view line);
std::string csv_escape(std::string_view field);

// --- files ------------------------------------------------------------------

/// Whole file as lines (universal newlines). Throws DataError if unreadable.
std::vector<std::string> read_lines(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// --- progress / warnings ----------------------------------------------------
// Diagnostics go to stderr as JSON lines so the machine summary on stdout
// stays clean. Tests can silence them.

void log_warn(const std::string& event, const std::string& detail);
void log_info(const std::string& event, const std::string& detail);
void set_log_enabled(bool enabled);

}  // namespace dupscan
