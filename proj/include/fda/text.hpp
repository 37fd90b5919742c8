#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fda {

/// Splits text into lowercase word tokens. Any code point that is not a
/// letter or digit is a separator; empty tokens are dropped. Invalid UTF-8
/// bytes are treated as separators.
std::vector<std::string> tokenize(std::string_view text);

/// True if `bytes` is well-formed UTF-8.
bool is_valid_utf8(std::string_view bytes);

/// Lowercases a UTF-8 string code point by code point.
std::string to_lower_utf8(std::string_view text);

/// Shortest round-trip decimal form of `value` ('.' separator, no locale).
std::string format_real(double value);

/// Parses a complete decimal number; nullopt on any trailing garbage.
std::optional<double> parse_real(std::string_view text);

/// Splits on `sep` without quoting rules.
std::vector<std::string_view> split(std::string_view text, char sep);

/// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

}  // namespace fda
