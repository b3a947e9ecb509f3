#include <doctest.h>

#include <random>

#include "semtex/error.hpp"
#include "semtex/math.hpp"
#include "semtex/tokenizer.hpp"
#include "semtex/xml.hpp"
#include "test_support.hpp"

using namespace semtex;
using math::MathTree;

namespace {

MathTree parse(std::string_view s) { return math::parse_math(tokenize(s)); }

ErrorCode code_of(std::string_view s, math::ParseOptions opts = {}) {
    try {
        math::parse_math(tokenize(s), opts);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error for " << s);
    return ErrorCode::InvalidArgument;
}

std::size_t count_mo(const MathTree& t) {
    std::vector<const MathTree*> leaves;
    math::collect_leaves(t, leaves);
    std::size_t n = 0;
    for (const MathTree* l : leaves) n += l->kind() == math::Kind::Mo;
    return n;
}

// Random expressions over letters, digits, binary operators, relations,
// parentheses, \left/\right, scripts and \frac, counting operator tokens
// (fences included) as they are generated.
class ExprGen {
public:
    explicit ExprGen(std::uint32_t seed) : rng_(seed) {}

    std::string expr(int depth, std::size_t& ops) {
        std::string s = term(depth, ops);
        const int n = static_cast<int>(rng_() % 3);
        for (int i = 0; i < n; ++i) {
            static const char* const kOps[] = {"+", "-", "=", "<", ">", "\\cdot ", "\\leq "};
            s += kOps[rng_() % 7];
            ++ops;
            s += term(depth, ops);
        }
        return s;
    }

private:
    std::string term(int depth, std::size_t& ops) {
        const unsigned pick = depth > 2 ? rng_() % 2 : rng_() % 6;
        switch (pick) {
            case 0: return std::string(1, static_cast<char>('a' + rng_() % 26));
            case 1: return std::to_string(rng_() % 100);
            case 2:
                ops += 2;
                return "(" + expr(depth + 1, ops) + ")";
            case 3:
                ops += 2;
                return "\\left[" + expr(depth + 1, ops) + "\\right]";
            case 4: return "{" + term(depth + 1, ops) + "}^{" + expr(depth + 1, ops) + "}";
            default: return "\\frac{" + expr(depth + 1, ops) + "}{" + expr(depth + 1, ops) + "}";
        }
    }

    std::mt19937 rng_;
};

}  // namespace

TEST_CASE("parse_math examples") {
    CHECK(parse(("a+b")) == MathTree::mrow({MathTree::mi("a"), MathTree::mo("+"), MathTree::mi("b")}));
    CHECK(parse("x^2") == MathTree::msup(MathTree::mi("x"), MathTree::mn("2")));
    CHECK(parse("\\frac{1}{x+1}") ==
          MathTree::mfrac(MathTree::mn("1"), MathTree::mrow({MathTree::mi("x"), MathTree::mo("+"), MathTree::mn("1")})));
    CHECK(parse("\\omega") == MathTree::mi("ω"));
    CHECK(parse("") == MathTree::mrow());
}

TEST_CASE("script errors and unknown commands") {
    CHECK(code_of("x^2^3") == ErrorCode::UnbalancedScripts);
    CHECK(code_of("x_1_2") == ErrorCode::UnbalancedScripts);
    CHECK(parse("^2") == MathTree::msup(MathTree::mrow(), MathTree::mn("2")));

    std::vector<std::string> warnings;
    const MathTree t = math::parse_math(tokenize("\\nosuch"), {}, &warnings);
    CHECK(t == MathTree::mo("\\nosuch"));
    CHECK(warnings.size() == 1);
    math::ParseOptions strict;
    strict.strict = true;
    CHECK(code_of("\\nosuch", strict) == ErrorCode::UnknownMathCommand);
}

TEST_CASE("mathml_serialize examples") {
    const std::string ns = "<math xmlns=\"" + std::string(xml::kMathMLNamespace) + "\" display=\"inline\">";
    CHECK(xml::to_string(DocNode(math::mathml_serialize(MathTree::mi("x"), MathDisplay::Inline))) ==
          ns + "<mi>x</mi></math>");
    CHECK(xml::to_string(DocNode(math::mathml_serialize(MathTree::mrow(), MathDisplay::Inline))) == ns + "<mrow/></math>");
    CHECK(xml::to_string(DocNode(math::mathml_serialize(MathTree::mo("<"), MathDisplay::Inline))) ==
          ns + "<mo>&lt;</mo></math>");
}

TEST_CASE("greek letters and command table") {
    CHECK(math::greek_letter("alpha") == "α");
    CHECK(math::greek_letter("Omega") == "Ω");
    CHECK(math::greek_letter("frac").empty());
    CHECK(math::is_math_command("frac"));
    CHECK(math::is_math_command("sqrt"));
    const auto names = math::math_command_names();
    CHECK(std::is_sorted(names.begin(), names.end()));
    for (const auto& n : names) CHECK(math::is_math_command(n));
}

TEST_CASE("property: operator count is preserved and output is well-formed") {
    ExprGen gen(77);
    for (int i = 0; i < 1000; ++i) {
        std::size_t ops = 0;
        const std::string s = gen.expr(0, ops);
        INFO(s);
        const MathTree t = parse(s);
        CHECK(count_mo(t) == ops);
        const std::string bytes = xml::to_string(DocNode(math::mathml_serialize(t, MathDisplay::Inline)));
        CHECK(test::well_formedness_error(bytes).empty());
    }
}
