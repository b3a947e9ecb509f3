#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "semtex/engine.hpp"
#include "semtex/error.hpp"
#include "test_support.hpp"

using namespace semtex;
using boost::multiprecision::cpp_int;

namespace {

const cpp_int kCountMax = 2147483647;
const cpp_int kDimenMax = (1 << 30) - 1;

struct Outcome {
    bool overflow = false;
    std::int32_t value = 0;
};

Outcome run_engine(const std::string& src, bool dimen) {
    Engine e(test::standard());
    e.set_source(src);
    try {
        e.run();
    } catch (const Error& err) {
        const ErrorCode c = err.code() == ErrorCode::FatalConversionError ? err.cause() : err.code();
        INFO(err.what());
        CHECK(c == ErrorCode::ArithmeticOverflow);
        return {true, 0};
    }
    return {false, dimen ? e.state().dimen(1).sp() : e.state().count(1)};
}

// Truncating division, as TeX does it.
cpp_int tex_div(const cpp_int& a, const cpp_int& b) {
    cpp_int q = abs(a) / abs(b);
    return (a < 0) != (b < 0) ? cpp_int(-q) : q;
}

std::int64_t operand(std::mt19937_64& rng) {
    switch (rng() % 4) {
        case 0: return static_cast<std::int64_t>(rng() % 21) - 10;
        case 1: return static_cast<std::int64_t>(rng() % 200001) - 100000;
        case 2: return static_cast<std::int64_t>(rng() % 4294967295ULL) - 2147483647;
        default: return (rng() % 2 ? 1 : -1) * static_cast<std::int64_t>(46341 + rng() % 10);
    }
}

}  // namespace

TEST_CASE("property: count arithmetic matches a big-integer oracle") {
    std::mt19937_64 rng(2024);
    int overflows = 0;
    for (int n = 0; n < 1500; ++n) {
        const std::int64_t init = operand(rng);
        std::string src = "\\count1=" + std::to_string(init) + " ";
        cpp_int model = init;
        bool expect_overflow = false;
        const int steps = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < steps && !expect_overflow; ++i) {
            const std::int64_t x = operand(rng);
            const unsigned op = rng() % 3;
            src += std::string(op == 0 ? "\\advance" : op == 1 ? "\\multiply" : "\\divide") + "\\count1 by " +
                   std::to_string(x) + " ";
            if (op == 0) {
                model += x;
            } else if (op == 1) {
                model *= x;
            } else if (x == 0) {
                expect_overflow = true;
                break;
            } else {
                model = tex_div(model, x);
            }
            if (abs(model) > kCountMax) expect_overflow = true;
        }
        INFO(src);
        const Outcome got = run_engine(src, false);
        CHECK(got.overflow == expect_overflow);
        if (!expect_overflow) CHECK(cpp_int(got.value) == model);
        overflows += expect_overflow;
    }
    CHECK(overflows > 50);
}

TEST_CASE("property: dimen arithmetic stays within the TeX bound") {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 800; ++n) {
        const std::int64_t init = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
        std::string src = "\\dimen1=" + std::to_string(init) + "sp ";
        cpp_int model = init;
        bool expect_overflow = false;
        for (int i = 0; i < 4 && !expect_overflow; ++i) {
            const unsigned op = rng() % 3;
            if (op == 0) {
                const std::int64_t x = static_cast<std::int64_t>(rng() % 2000000001) - 1000000000;
                src += "\\advance\\dimen1 by " + std::to_string(x) + "sp ";
                model += x;
            } else {
                const std::int64_t x = static_cast<std::int64_t>(rng() % 4001) - 2000;
                src += std::string(op == 1 ? "\\multiply" : "\\divide") + "\\dimen1 by " + std::to_string(x) + " ";
                if (op == 2 && x == 0) {
                    expect_overflow = true;
                    break;
                }
                model = op == 1 ? cpp_int(model * x) : tex_div(model, x);
            }
            if (abs(model) > kDimenMax) expect_overflow = true;
        }
        INFO(src);
        const Outcome got = run_engine(src, true);
        CHECK(got.overflow == expect_overflow);
        if (!expect_overflow) CHECK(cpp_int(got.value) == model);
    }
}

TEST_CASE("edges of the count range") {
    CHECK(run_engine("\\count1=2147483647 ", false).value == 2147483647);
    CHECK(run_engine("\\count1=-2147483647 \\advance\\count1 by -1 ", false).overflow);
    CHECK(run_engine("\\count1=-7 \\divide\\count1 by 2 ", false).value == -3);
    CHECK(run_engine("\\count1=65536 \\multiply\\count1 by 32768 ", false).overflow);
}
