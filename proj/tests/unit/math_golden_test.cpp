#include <doctest.h>

#include "semtex/math.hpp"
#include "semtex/tokenizer.hpp"
#include "semtex/xml.hpp"
#include "test_support.hpp"

using namespace semtex;

namespace {

// Independent reader for the golden notation: kind(child, ...) or
// "kind text", with a trailing * marking a stretchy mo.
class SexprToMathml {
public:
    explicit SexprToMathml(std::string_view s) : s_(s) {}

    std::string run() {
        std::string out = node();
        REQUIRE(pos_ == s_.size());
        return out;
    }

private:
    std::string node() {
        const auto name_end = s_.find_first_of(" (", pos_);
        const std::string kind(s_.substr(pos_, name_end - pos_));
        pos_ = name_end;
        if (kind == "mi" || kind == "mn" || kind == "mo") {
            ++pos_;  // space
            std::size_t end = pos_ + 1;
            while (end < s_.size() && s_[end] != ',' && s_[end] != ')') ++end;
            std::string text(s_.substr(pos_, end - pos_));
            pos_ = end;
            std::string open = "<" + kind;
            if (kind == "mo" && text.size() > 1 && text.back() == '*') {
                text.pop_back();
                open += " stretchy=\"true\"";
            }
            std::string escaped;
            xml::escape_text(escaped, text);
            return open + ">" + escaped + "</" + kind + ">";
        }
        ++pos_;  // (
        std::string inner;
        while (s_[pos_] != ')') {
            inner += node();
            if (s_[pos_] == ',') pos_ += 2;
        }
        ++pos_;
        return inner.empty() ? "<" + kind + "/>" : "<" + kind + ">" + inner + "</" + kind + ">";
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

TEST_CASE("math golden suite: trees match exactly") {
    const auto cases = test::math_golden_cases();
    CHECK(cases.size() >= 30);
    for (const auto& [expr, expected] : cases) {
        INFO(expr);
        CHECK(math::to_sexpr(math::parse_math(tokenize(expr))) == expected);
    }
}

TEST_CASE("math golden suite: serialized MathML matches an independent rendering of the golden tree") {
    for (const auto& [expr, expected] : test::math_golden_cases()) {
        INFO(expr);
        const std::string want = std::string("<math xmlns=\"") + std::string(xml::kMathMLNamespace) +
                                 "\" display=\"block\">" + SexprToMathml(expected).run() + "</math>";
        const std::string got = xml::to_string(DocNode(math::mathml_serialize(math::parse_math(tokenize(expr)),
                                                                               MathDisplay::Block)));
        CHECK(got == want);
        CHECK(test::well_formedness_error(got).empty());
    }
}
