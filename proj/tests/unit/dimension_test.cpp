#include <doctest.h>

#include <random>

#include "semtex/dimension.hpp"

using namespace semtex;

namespace {

// Reads a print_scaled string back the way TeX's scanner does: integer
// part plus round_decimals of up to 17 fraction digits.
std::int32_t read_back(const std::string& s) {
    std::string body = s;
    const bool neg = !body.empty() && body[0] == '-';
    if (neg) body.erase(0, 1);
    const auto dot = body.find('.');
    const std::int32_t whole = std::stoi(body.substr(0, dot));
    std::string frac = dot == std::string::npos ? "" : body.substr(dot + 1);
    if (frac.size() > 17) frac.resize(17);
    const std::int32_t v = whole * kUnity + round_decimals(frac);
    return neg ? -v : v;
}

}  // namespace

TEST_CASE("print_scaled examples") {
    CHECK(print_scaled(163840) == "2.5");
    CHECK(print_scaled(65536) == "1.0");
    CHECK(print_scaled(0) == "0.0");
    CHECK(print_scaled(-98304) == "-1.5");
    CHECK(print_scaled(4736286) == "72.26999");
    CHECK(print_scaled(1) == "0.00002");
}

TEST_CASE("round_decimals examples") {
    CHECK(round_decimals("5") == 32768);
    CHECK(round_decimals("25") == 16384);
    CHECK(round_decimals("") == 0);
    CHECK(round_decimals("99999999") == 65536);
}

TEST_CASE("property: print_scaled reads back to the same sp") {
    std::mt19937 rng(5);
    for (int i = 0; i < 20000; ++i) {
        const auto sp = static_cast<std::int32_t>(rng() % (2u * kMaxDimen + 1)) - kMaxDimen;
        INFO(sp);
        CHECK(read_back(print_scaled(sp)) == sp);
    }
}

TEST_CASE("Dimension basics") {
    CHECK(Dimension::from_pt(3).sp() == 3 * 65536);
    CHECK(Dimension::from_sp(32768).pt() == 0.5);
    CHECK(Dimension::from_sp(1) < Dimension::from_sp(2));
}
