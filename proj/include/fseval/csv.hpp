#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fseval::csv {

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_line(std::string_view line);

// Splits text into lines, dropping a trailing '\r' and empty trailing lines.
std::vector<std::string> lines(std::string_view text);

// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

// Strict decimal parse of the whole field (surrounding blanks allowed).
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

// Shortest representation that parses back to the same double.
std::string format_roundtrip(double v);
// printf-style "%.*f" and "%.*g".
std::string format_fixed(double v, int decimals);
std::string format_general(double v, int significant);

std::string read_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace fseval::csv
