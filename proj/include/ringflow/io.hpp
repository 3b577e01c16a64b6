#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ringflow::io {

inline constexpr int kSchemaVersion = 1;

/// "%.17g": enough digits to round-trip any double.
std::string format_double(double v);

/// Parses "1,2,3" (whitespace around entries allowed).
std::vector<double> parse_number_list(std::string_view text);

// Reads a vector from a file. JSON files may hold a bare array or an object
// with the array under `key`; anything else is read as CSV/whitespace
// separated numbers, skipping a non-numeric header line.
std::vector<double> read_vector_file(const std::filesystem::path& path, std::string_view key);

/// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ringflow::io
