#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace claimlab::text {

// Number of Unicode code points in a UTF-8 string. Invalid bytes count as
// one code point each.
std::size_t codepoint_count(std::string_view utf8);

// Decodes the code point starting at `pos` and advances `pos` past it.
// Invalid sequences yield U+FFFD and consume a single byte.
char32_t next_codepoint(std::string_view utf8, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

bool is_valid_utf8(std::string_view bytes);

// Letters and digits. ASCII is classified exactly; non-ASCII code points are
// word characters unless they fall in a punctuation, symbol, or space block.
bool is_word_codepoint(char32_t cp);

bool is_ascii_space(char c);

// Runs of ASCII whitespace become one space; leading/trailing space trimmed.
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::string trim(std::string_view s);

}  // namespace claimlab::text
