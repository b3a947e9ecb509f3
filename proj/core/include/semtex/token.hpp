// token.hpp - the lexical unit produced by the tokenizer and moved around by
// the expansion engine
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semtex/catcode.hpp"
#include "semtex/error.hpp"

namespace semtex {

enum class TokenKind : std::uint8_t { ControlSequence, Char, Param };

class Token {
public:
    Token() = default;

    static Token control(std::string name, SourcePos pos = {});
    static Token character(char32_t ch, Catcode cat, SourcePos pos = {});
    static Token space(SourcePos pos = {}) { return character(U' ', Catcode::Space, pos); }
    static Token param(int index);

    TokenKind kind() const { return kind_; }
    bool is_control() const { return kind_ == TokenKind::ControlSequence; }
    bool is_char() const { return kind_ == TokenKind::Char; }
    bool is_param() const { return kind_ == TokenKind::Param; }

    const std::string& name() const { return name_; }
    char32_t ch() const { return ch_; }
    Catcode cat() const { return cat_; }
    int param_index() const { return param_; }

    bool is_char(Catcode cat) const { return kind_ == TokenKind::Char && cat_ == cat; }
    bool is_char(char32_t ch, Catcode cat) const { return is_char(cat) && ch_ == ch; }
    bool is_space() const { return is_char(Catcode::Space); }
    bool is_control(std::string_view name) const { return is_control() && name_ == name; }
    // control sequences and active characters are looked up in the binding table
    bool is_definable() const { return is_control() || is_char(Catcode::Active); }

    // Key under which a definable token's meaning is stored.
    std::string binding_key() const;

    const SourcePos& pos() const { return pos_; }
    void set_pos(SourcePos pos) { pos_ = pos; }

    // Set by \noexpand: the token is not expanded the next time it is read.
    bool noexpand() const { return noexpand_; }
    void set_noexpand(bool v) { noexpand_ = v; }

    // Equality ignores source position and the noexpand mark.
    friend bool operator==(const Token& a, const Token& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
        case TokenKind::ControlSequence: return a.name_ == b.name_;
        case TokenKind::Char: return a.ch_ == b.ch_ && a.cat_ == b.cat_;
        case TokenKind::Param: return a.param_ == b.param_;
        }
        return false;
    }

private:
    TokenKind kind_ = TokenKind::Char;
    Catcode cat_ = Catcode::Other;
    bool noexpand_ = false;
    char32_t ch_ = 0;
    int param_ = 0;
    std::string name_;
    SourcePos pos_;
};

using TokenList = std::vector<Token>;

// Key of the binding table entry for an active character.
std::string active_key(char32_t ch);

// Human-readable dump for test failures, e.g. [\foo, x(11), ␣].
std::string debug_string(const TokenList& tokens);

}  // namespace semtex
