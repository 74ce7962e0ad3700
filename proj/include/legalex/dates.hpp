#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace legalex {

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;
};

struct YearMonth {
    int year = 0;
    int month = 0;

    auto operator<=>(const YearMonth&) const = default;
};

/// Parses "YYYY-MM-DD"; nullopt on malformed or out-of-range input.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& d);

inline YearMonth year_month(const Date& d) { return YearMonth{d.year, d.month}; }

}  // namespace legalex
