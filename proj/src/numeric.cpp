#include "legalex/numeric.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace legalex {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

void warn(std::vector<std::string>* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

std::optional<double> to_double(const std::string& s) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace

std::optional<double> parse_spanish_number(std::string_view text,
                                           std::vector<std::string>* warnings) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) return std::nullopt;

    auto unparseable = [&]() -> std::optional<double> {
        warn(warnings, "unparseable numeral: '" + std::string(text) + "'");
        return std::nullopt;
    };

    std::size_t comma = s.find(',');
    if (comma != std::string::npos) {
        if (s.find(',', comma + 1) != std::string::npos) return unparseable();
        std::string integer = s.substr(0, comma);
        std::string fraction = s.substr(comma + 1);
        if (!all_digits(fraction)) return unparseable();
        std::string digits;
        for (char c : integer) {
            if (c == '.') continue;
            if (!std::isdigit(static_cast<unsigned char>(c))) return unparseable();
            digits.push_back(c);
        }
        if (digits.empty()) return unparseable();
        return to_double(digits + "." + fraction);
    }

    std::size_t dots = 0;
    for (char c : s)
        if (c == '.') ++dots;
    if (dots == 0) {
        if (!all_digits(s)) return unparseable();
        return to_double(s);
    }

    // dot-separated groups
    std::vector<std::string> groups;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '.') {
            groups.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    for (const auto& g : groups)
        if (!all_digits(g)) return unparseable();

    bool grouping = true;
    for (std::size_t i = 1; i < groups.size(); ++i)
        if (groups[i].size() != 3) grouping = false;

    if (grouping) {
        std::string digits;
        for (const auto& g : groups) digits += g;
        return to_double(digits);
    }
    if (dots == 1) {
        warn(warnings, "ambiguous numeral '" + std::string(text) + "' read as decimal");
        return to_double(groups[0] + "." + groups[1]);
    }
    return unparseable();
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

}  // namespace legalex
