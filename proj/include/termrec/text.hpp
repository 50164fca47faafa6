#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace termrec {

std::string to_lower_ascii(std::string_view s);

// Trim ends and collapse internal whitespace runs to a single space.
std::string normalize_whitespace(std::string_view s);

// Irregular search tokens: empty, all digits, or all punctuation
// (whitespace ignored in both checks).
bool is_irregular_token(std::string_view normalized);

// One CSV record. Supports double-quoted fields with "" escapes; does not
// handle embedded newlines (input files are one record per line).
std::vector<std::string> split_csv_line(std::string_view line);

std::string csv_quote(std::string_view field);

std::vector<std::string> split(std::string_view s, char sep);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(std::uint64_t h, std::string_view bytes); // streaming

} // namespace termrec
