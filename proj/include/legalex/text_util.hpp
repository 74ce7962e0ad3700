#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace legalex {

// Byte-level UTF-8 helpers. Spans into document text are byte offsets and
// must always fall on code point boundaries.

/// True when the byte at `pos` starts a UTF-8 code point (or pos is at an end).
bool is_utf8_boundary(std::string_view text, std::size_t pos);

/// Largest code point boundary <= pos.
std::size_t utf8_floor(std::string_view text, std::size_t pos);

/// Smallest code point boundary >= pos.
std::size_t utf8_ceil(std::string_view text, std::size_t pos);

/// Number of code points in a valid UTF-8 string.
std::size_t utf8_length(std::string_view text);

/// Byte offset just after the first `n_chars` code points (clamped to size).
std::size_t utf8_prefix_bytes(std::string_view text, std::size_t n_chars);

/// Offset of the first invalid UTF-8 byte, or npos when the text is valid.
std::size_t utf8_find_invalid(std::string_view text);

// Whitespace test used by the tokenizer: ASCII whitespace plus the common
// typographic spaces (NBSP, U+2000..U+200A, U+2028/29, U+3000) that PDF
// extractors tend to emit. Returns the byte length of the whitespace code
// point starting at `pos`, or 0 when it is not whitespace.
std::size_t whitespace_length_at(std::string_view text, std::size_t pos);

/// ASCII + Latin-1 supplement lowercase, enough for Spanish text.
std::string to_lower(std::string_view text);

/// Case-insensitive substring test (both sides lowered with to_lower).
bool contains_ci(std::string_view haystack, std::string_view needle);

std::string trim(std::string_view text);

}  // namespace legalex
