#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent numeric text I/O plus the small string helpers the
// parsers share. All output uses '.' as decimal separator regardless of the
// process locale.

namespace kinebench::num {

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

// Fixed-point with the given number of decimals ("12.34"). Negative zero is
// normalized to a plain zero string.
std::string format_fixed(double v, int precision);

// Accepts scientific thanks to std::from_chars, also "nan"/"inf" variants.
// Returns nullopt if the token is not fully consumed.
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view s);

// Split on a single delimiter, keeping empty cells.
std::vector<std::string_view> split(std::string_view s, char delim);

// Split on runs of spaces/tabs, dropping empties.
std::vector<std::string_view> split_ws(std::string_view s);

// Splits text into lines; accepts LF and CRLF, drops the terminators.
std::vector<std::string_view> split_lines(std::string_view text);

} // namespace kinebench::num
