#pragma once

// Small text helpers shared by the readers and writers in this library.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace congae::text {

/// Splits one delimited line; fields may be wrapped in double quotes
/// (with "" as an escaped quote). Surrounding whitespace is trimmed.
std::vector<std::string> split_fields(std::string_view line, char delim);

std::string_view trim(std::string_view s);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest representation that round-trips exactly.
std::string format_double(double v);

}  // namespace congae::text
