#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphhop {

std::string to_lower(std::string_view s);

// Lowercase, trim ends, collapse internal whitespace runs to one space.
std::string normalize_answer(std::string_view s);

// Lowercased alphanumeric runs; everything else is a separator.
std::vector<std::string> tokenize(std::string_view s);

// First numeric magnitude in the string ("+133 minute" -> 133).
std::optional<double> parse_magnitude(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::vector<std::string> split(std::string_view s, char sep);

bool contains(std::string_view haystack, std::string_view needle);

}  // namespace graphhop
