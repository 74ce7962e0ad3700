#include "legalex/text_util.hpp"

#include <algorithm>

namespace legalex {

namespace {

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

// Expected length of the sequence starting with lead byte `b`, 0 if invalid.
inline std::size_t lead_length(unsigned char b) {
    if (b < 0x80) return 1;
    if ((b & 0xE0) == 0xC0) return 2;
    if ((b & 0xF0) == 0xE0) return 3;
    if ((b & 0xF8) == 0xF0) return 4;
    return 0;
}

}  // namespace

bool is_utf8_boundary(std::string_view text, std::size_t pos) {
    if (pos >= text.size()) return true;
    return !is_continuation(static_cast<unsigned char>(text[pos]));
}

std::size_t utf8_floor(std::string_view text, std::size_t pos) {
    pos = std::min(pos, text.size());
    while (pos > 0 && !is_utf8_boundary(text, pos)) --pos;
    return pos;
}

std::size_t utf8_ceil(std::string_view text, std::size_t pos) {
    pos = std::min(pos, text.size());
    while (pos < text.size() && !is_utf8_boundary(text, pos)) ++pos;
    return pos;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (!is_continuation(static_cast<unsigned char>(text[i]))) ++n;
    return n;
}

std::size_t utf8_prefix_bytes(std::string_view text, std::size_t n_chars) {
    std::size_t seen = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (seen == n_chars) break;
        std::size_t len = lead_length(static_cast<unsigned char>(text[i]));
        if (len == 0) len = 1;  // tolerate stray bytes; validation happens elsewhere
        i = std::min(text.size(), i + len);
        ++seen;
    }
    return i;
}

std::size_t utf8_find_invalid(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char b = static_cast<unsigned char>(text[i]);
        std::size_t len = lead_length(b);
        if (len == 0) return i;
        if (i + len > text.size()) return i;
        for (std::size_t j = 1; j < len; ++j)
            if (!is_continuation(static_cast<unsigned char>(text[i + j]))) return i;
        // reject overlong encodings and out-of-range code points
        if (len == 2 && b < 0xC2) return i;
        if (len == 3 && b == 0xE0 && static_cast<unsigned char>(text[i + 1]) < 0xA0) return i;
        if (len == 4 && b == 0xF0 && static_cast<unsigned char>(text[i + 1]) < 0x90) return i;
        if (len == 4 && b > 0xF4) return i;
        i += len;
    }
    return std::string_view::npos;
}

std::size_t whitespace_length_at(std::string_view text, std::size_t pos) {
    if (pos >= text.size()) return 0;
    unsigned char a = static_cast<unsigned char>(text[pos]);
    if (a == ' ' || (a >= 0x09 && a <= 0x0D)) return 1;
    auto at = [&](std::size_t off) -> unsigned char {
        return pos + off < text.size() ? static_cast<unsigned char>(text[pos + off]) : 0;
    };
    if (a == 0xC2 && at(1) == 0xA0) return 2;  // NBSP
    if (a == 0xE2 && at(1) == 0x80) {
        unsigned char c = at(2);
        if ((c >= 0x80 && c <= 0x8A) || c == 0xA8 || c == 0xA9 || c == 0xAF) return 3;
    }
    if (a == 0xE2 && at(1) == 0x81 && at(2) == 0x9F) return 3;  // U+205F
    if (a == 0xE3 && at(1) == 0x80 && at(2) == 0x80) return 3;  // U+3000
    return 0;
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char b = static_cast<unsigned char>(text[i]);
        if (b >= 'A' && b <= 'Z') {
            out.push_back(static_cast<char>(b + 0x20));
        } else if (b == 0xC3 && i + 1 < text.size()) {
            // Latin-1 supplement: U+00C0..U+00DE map to +0x20, except U+00D7.
            unsigned char c = static_cast<unsigned char>(text[i + 1]);
            out.push_back(static_cast<char>(b));
            if (c >= 0x80 && c <= 0x9E && c != 0x97)
                out.push_back(static_cast<char>(c + 0x20));
            else
                out.push_back(static_cast<char>(c));
            ++i;
        } else {
            out.push_back(static_cast<char>(b));
        }
    }
    return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::string trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && whitespace_length_at(text, b) > 0) b += whitespace_length_at(text, b);
    while (e > b) {
        std::size_t p = utf8_floor(text, e - 1);
        std::size_t len = whitespace_length_at(text, p);
        if (len > 0 && p + len == e)
            e = p;
        else
            break;
    }
    return std::string(text.substr(b, e - b));
}

}  // namespace legalex
