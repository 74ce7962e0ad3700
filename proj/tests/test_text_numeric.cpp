#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "legalex/dates.hpp"
#include "legalex/hashing.hpp"
#include "legalex/numeric.hpp"
#include "legalex/text_util.hpp"

using namespace legalex;

TEST_CASE("utf8 boundaries and lengths") {
    std::string s = "año";  // "año": 'a', 2-byte ñ, 'o'
    REQUIRE(s.size() == 4);
    CHECK(is_utf8_boundary(s, 0));
    CHECK(is_utf8_boundary(s, 1));
    CHECK_FALSE(is_utf8_boundary(s, 2));  // inside ñ
    CHECK(is_utf8_boundary(s, 3));
    CHECK(is_utf8_boundary(s, 4));  // end counts

    CHECK(utf8_floor(s, 2) == 1);
    CHECK(utf8_ceil(s, 2) == 3);
    CHECK(utf8_floor(s, 3) == 3);
    CHECK(utf8_ceil(s, 3) == 3);

    CHECK(utf8_length(s) == 3);
    CHECK(utf8_length("") == 0);
    CHECK(utf8_length("daño moral") == 10);

    CHECK(utf8_prefix_bytes(s, 0) == 0);
    CHECK(utf8_prefix_bytes(s, 1) == 1);
    CHECK(utf8_prefix_bytes(s, 2) == 3);
    CHECK(utf8_prefix_bytes(s, 3) == 4);
    CHECK(utf8_prefix_bytes(s, 99) == 4);  // clamped

    CHECK(utf8_find_invalid(s) == std::string::npos);
    std::string bad = "ok\xC3";  // truncated sequence
    CHECK(utf8_find_invalid(bad) == 2);
    std::string lone = "a\xB1z";  // stray continuation byte
    CHECK(utf8_find_invalid(lone) == 1);
}

TEST_CASE("whitespace detection covers typographic spaces") {
    CHECK(whitespace_length_at(" x", 0) == 1);
    CHECK(whitespace_length_at("\tx", 0) == 1);
    CHECK(whitespace_length_at("\nx", 0) == 1);
    CHECK(whitespace_length_at("x", 0) == 0);
    std::string nbsp = "a b";
    CHECK(whitespace_length_at(nbsp, 1) == 2);
    std::string ideo = "　b";
    CHECK(whitespace_length_at(ideo, 0) == 3);
    std::string enspace = " b";
    CHECK(whitespace_length_at(enspace, 0) == 3);
    // ñ is not whitespace
    std::string enye = "ñ";
    CHECK(whitespace_length_at(enye, 0) == 0);
}

TEST_CASE("lowercasing handles Spanish accents") {
    CHECK(to_lower("ABC xyz") == "abc xyz");
    CHECK(to_lower("FÍSICA") == "física");
    CHECK(to_lower("PSÍQUICO Ñandú") == "psíquico ñandú");
    CHECK(contains_ci("Incapacidad FÍSICA parcial", "física"));
    CHECK(contains_ci("DAÑO MORAL", "daño moral"));
    CHECK_FALSE(contains_ci("daño emergente", "daño moral"));
}

TEST_CASE("trim strips ascii whitespace") {
    CHECK(trim("  hola  ") == "hola");
    CHECK(trim("\n\thola\r\n") == "hola");
    CHECK(trim("") == "");
    CHECK(trim("   ") == "");
}

TEST_CASE("argentine numerals: comma decimal, dot grouping") {
    auto p = [](const std::string& s) { return parse_spanish_number(s); };

    CHECK(p("15,5") == 15.5);
    CHECK(p("1.234,56") == 1234.56);
    CHECK(p("1.234.567,89") == 1234567.89);
    CHECK(p("1234567,89") == 1234567.89);
    CHECK(p("25") == 25.0);
    CHECK(p("1.234") == 1234.0);
    CHECK(p("1.234.567") == 1234567.0);
    CHECK(p("1234.567") == 1234567.0);  // first group may be long
    CHECK(p("0,5") == 0.5);
    CHECK(p("1 234,5") == 1234.5);  // stray spaces dropped

    SUBCASE("single ambiguous dot reads as decimal, with a warning") {
        std::vector<std::string> warnings;
        CHECK(parse_spanish_number("12.5", &warnings) == 12.5);
        REQUIRE(warnings.size() == 1);
        CHECK(warnings[0].find("ambiguous") != std::string::npos);
        warnings.clear();
        CHECK(parse_spanish_number("12.34", &warnings) == 12.34);
        CHECK(warnings.size() == 1);
        warnings.clear();
        CHECK(parse_spanish_number("1.2345", &warnings) == 1.2345);
        CHECK(warnings.size() == 1);
        warnings.clear();
        // exactly three digits after a single dot is grouping, no warning
        CHECK(parse_spanish_number("1.234", &warnings) == 1234.0);
        CHECK(warnings.empty());
    }

    SUBCASE("unparseable forms") {
        std::vector<std::string> warnings;
        CHECK_FALSE(parse_spanish_number("1,2,3", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number("1.234.56", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number("1..2", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number(",5", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number("", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number("abc", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number("12a", &warnings).has_value());
        CHECK_FALSE(parse_spanish_number("1,2.3", &warnings).has_value());
        // every rejected form warns except the empty string, which is silent
        CHECK(warnings.size() == 7);
    }
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, 0.5, 15.5, 1234.56, 1234567.89, 0.1, 1e-9, 123456789.123}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(format_double(25.0) == "25");
    CHECK(format_double(15.5) == "15.5");
}

TEST_CASE("sha256 known vectors") {
    // FIPS 180-2 test vectors
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("date parsing") {
    auto d = parse_date("2019-03-01");
    REQUIRE(d.has_value());
    CHECK(d->year == 2019);
    CHECK(d->month == 3);
    CHECK(d->day == 1);
    CHECK(format_date(*d) == "2019-03-01");
    CHECK(year_month(*d) == YearMonth{2019, 3});

    CHECK_FALSE(parse_date("2019-13-01").has_value());
    CHECK_FALSE(parse_date("2019-00-01").has_value());
    CHECK_FALSE(parse_date("2019-02-32").has_value());
    CHECK_FALSE(parse_date("19-02-03").has_value());
    CHECK_FALSE(parse_date("2019/02/03").has_value());
    CHECK_FALSE(parse_date("").has_value());

    CHECK(YearMonth{2019, 3} < YearMonth{2019, 4});
    CHECK(YearMonth{2019, 12} < YearMonth{2020, 1});
}
