#include <doctest.h>

#include <random>

#include "semtex/error.hpp"
#include "semtex/tokenizer.hpp"

using namespace semtex;

namespace {

Token cs(const char* name) { return Token::control(name); }
Token ch(char32_t c, Catcode cat) { return Token::character(c, cat); }
Token letter(char32_t c) { return ch(c, Catcode::Letter); }
Token other(char32_t c) { return ch(c, Catcode::Other); }
Token sp() { return Token::space(); }

ErrorCode code_of(std::string_view src, const CatcodeTable& table = {}) {
    try {
        tokenize(src, table);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised for " << src);
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("control word swallows following spaces") {
    CHECK(tokenize("\\alpha x") == TokenList{cs("alpha"), letter('x')});
}

TEST_CASE("braces map to group catcodes") {
    CHECK(tokenize("{a}") == TokenList{ch('{', Catcode::BeginGroup), letter('a'), ch('}', Catcode::EndGroup)});
}

TEST_CASE("space runs collapse and a comment eats the line end") {
    CHECK(tokenize("a  b%note\nc") == TokenList{letter('a'), sp(), letter('b'), letter('c')});
}

TEST_CASE("line ends: space mid-line, par on an empty line, nothing after a control word") {
    CHECK(tokenize("a\nb") == TokenList{letter('a'), sp(), letter('b')});
    CHECK(tokenize("a\n\nb") == TokenList{letter('a'), sp(), cs("par"), letter('b')});
    CHECK(tokenize("\\foo\nb") == TokenList{cs("foo"), letter('b')});
    CHECK(tokenize("   a") == TokenList{letter('a')});
    CHECK(tokenize("a\r\nb") == TokenList{letter('a'), sp(), letter('b')});
}

TEST_CASE("tab is a space and ignored characters vanish") {
    CHECK(tokenize("a\t\tb") == TokenList{letter('a'), sp(), letter('b')});
    CatcodeTable t;
    t.set(U'!', Catcode::Ignored);
    CHECK(tokenize("a!b", t) == TokenList{letter('a'), letter('b')});
}

TEST_CASE("control symbols") {
    CHECK(tokenize("\\$x") == TokenList{cs("$"), letter('x')});
    CHECK(tokenize("\\ x") == TokenList{cs(" "), letter('x')});
    CHECK(tokenize("\\, x") == TokenList{cs(","), sp(), letter('x')});
}

TEST_CASE("non-ASCII letters via catcode change") {
    CatcodeTable t;
    t.set(U'é', Catcode::Letter);
    CHECK(tokenize("\\caf\u00e9 x", t) == TokenList{cs("caf\u00e9"), letter('x')});
    CHECK(tokenize("\\caf\u00e9") == TokenList{cs("caf"), other(U'é')});
}

TEST_CASE("active characters") {
    CatcodeTable t;
    t.set(U'~', Catcode::Active);
    const TokenList ts = tokenize("a~b", t);
    REQUIRE(ts.size() == 3);
    CHECK(ts[1].is_char(Catcode::Active));
    CHECK(ts[1].is_definable());
}

TEST_CASE("errors") {
    CatcodeTable t;
    t.set(U'!', Catcode::Invalid);
    CHECK(code_of("a!b", t) == ErrorCode::InvalidCharacter);
    CHECK(code_of("a\\") == ErrorCode::UnterminatedControlSequence);
    CHECK(code_of("^^M") == ErrorCode::InvalidCharacter);
    CHECK(tokenize("x^2").size() == 3);
}

TEST_CASE("positions are 1-based line and column") {
    const TokenList ts = tokenize("ab\n  \\c");
    REQUIRE(ts.size() == 4);
    CHECK(ts[1].pos() == SourcePos{1, 2});
    CHECK(ts[3].pos() == SourcePos{2, 3});
}

TEST_CASE("detokenize") {
    CHECK(detokenize({cs("foo"), letter('x')}) == "\\foo x");
    CHECK(detokenize({}).empty());
    CHECK(detokenize({ch('{', Catcode::BeginGroup), ch('}', Catcode::EndGroup)}) == "{}");
    CHECK(detokenize({cs("a"), cs(","), letter('b')}) == "\\a \\,b");
    CHECK(detokenize({Token::param(2)}) == "#2");
}

TEST_CASE("property: no comment or invalid catcode ever reaches the output") {
    std::mt19937 rng(1234);
    const std::string alphabet = "ab \\{}$%&#^_\n\t12.,~";
    for (int n = 0; n < 2000; ++n) {
        std::string src;
        const int len = static_cast<int>(rng() % 30);
        for (int i = 0; i < len; ++i) src += alphabet[rng() % alphabet.size()];
        TokenList ts;
        try {
            ts = tokenize(src);
        } catch (const Error&) {
            continue;
        }
        for (const Token& t : ts) {
            if (!t.is_char()) continue;
            CHECK(t.cat() != Catcode::Comment);
            CHECK(t.cat() != Catcode::Invalid);
            CHECK(t.cat() != Catcode::Escape);
            CHECK(t.cat() != Catcode::EndOfLine);
            CHECK(t.cat() != Catcode::Ignored);
        }
        CHECK(ts == tokenize(src));
    }
}

// Random token sequences in the normal form the scanner produces: no
// leading space, no space after a space or a control word/control space.
TEST_CASE("property: tokenize(detokenize(ts)) == ts") {
    std::mt19937 rng(99);
    const std::vector<Token> chars{letter('a'),
                                   letter('Z'),
                                   other('1'),
                                   other('.'),
                                   other('('),
                                   ch('{', Catcode::BeginGroup),
                                   ch('}', Catcode::EndGroup),
                                   ch('$', Catcode::MathShift),
                                   ch('&', Catcode::AlignTab),
                                   ch('^', Catcode::Superscript),
                                   ch('_', Catcode::Subscript)};
    const std::vector<Token> controls{cs("foo"), cs("x"), cs("par"), cs(","), cs("{"), cs(" "), cs("%")};
    int checked = 0;
    for (int n = 0; n < 1000; ++n) {
        TokenList ts;
        const int len = 1 + static_cast<int>(rng() % 25);
        for (int i = 0; i < len; ++i) {
            const unsigned pick = rng() % 10;
            const bool space_ok = !ts.empty() && !ts.back().is_space() &&
                                  !(ts.back().is_control() &&
                                    (ts.back().name() == " " || std::isalpha(static_cast<unsigned char>(ts.back().name()[0]))));
            if (pick < 2 && space_ok) {
                ts.push_back(sp());
            } else if (pick < 4) {
                ts.push_back(controls[rng() % controls.size()]);
            } else {
                Token c = chars[rng() % chars.size()];
                // ^^ would be read as character notation
                if (c.is_char(Catcode::Superscript) && !ts.empty() && ts.back().is_char(Catcode::Superscript)) continue;
                ts.push_back(c);
            }
        }
        const std::string text = detokenize(ts);
        INFO(text);
        CHECK(tokenize(text) == ts);
        ++checked;
    }
    CHECK(checked == 1000);
}
