#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace legalex {

// Parses numerals as written in Argentine rulings: dots group thousands,
// the comma is the decimal separator ("1.234.567,89" -> 1234567.89).
//
// Rules:
//   - comma present: everything after the last comma is the fraction; dots in
//     the integer part are dropped as grouping marks
//   - dots only, every group after the first exactly 3 digits: grouping marks
//   - a single dot with a trailing group of != 3 digits: decimal point, and a
//     warning is recorded because the writing is ambiguous
//   - anything else (two commas, mixed order, bad grouping): unparseable
std::optional<double> parse_spanish_number(std::string_view text,
                                           std::vector<std::string>* warnings = nullptr);

/// Shortest round-trip decimal rendering, dot decimal separator.
std::string format_double(double value);

}  // namespace legalex
