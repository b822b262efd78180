#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrlprep::unicode {

// Byte offset of the first malformed UTF-8 sequence, or nullopt when `text`
// is well formed. Overlongs, surrogates and code points above U+10FFFF count
// as malformed.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

struct CodePoint {
  char32_t value;          // U+FFFD for a malformed byte
  std::string_view bytes;  // view into the decoded text
};

std::vector<CodePoint> decode(std::string_view text);

// Splits well-formed UTF-8 into one string per code point.
std::vector<std::string> split_code_points(std::string_view text);

// Number of code points; malformed bytes count one each.
std::size_t code_point_count(std::string_view text);

std::string encode_code_point(char32_t cp);

bool is_whitespace(char32_t cp);

// NFC normalization. Malformed input is replaced with U+FFFD first.
std::string to_nfc(std::string_view text);

}  // namespace lrlprep::unicode
