#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mnread::unicode {

/// Canonical composition (NFC). Throws FormatError on invalid UTF-8.
std::string nfc(std::string_view utf8);

/// Code points of a UTF-8 string; invalid sequences become U+FFFD.
std::vector<char32_t> code_points(std::string_view utf8);

/// Number of code points.
std::size_t length(std::string_view utf8);

std::string to_lower(std::string_view utf8);

/// True when the first code point is an uppercase or titlecase letter.
bool starts_upper(std::string_view utf8);

bool is_space(char32_t c);
bool is_lower(char32_t c);

std::string encode(char32_t c);

}  // namespace mnread::unicode
