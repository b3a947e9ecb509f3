#include "semtex/tokenizer.hpp"

#include "semtex/utf8.hpp"

namespace semtex {

std::string_view catcode_name(Catcode cat) {
    switch (cat) {
    case Catcode::Escape: return "escape";
    case Catcode::BeginGroup: return "begin-group";
    case Catcode::EndGroup: return "end-group";
    case Catcode::MathShift: return "math-shift";
    case Catcode::AlignTab: return "alignment";
    case Catcode::EndOfLine: return "end-of-line";
    case Catcode::Parameter: return "parameter";
    case Catcode::Superscript: return "superscript";
    case Catcode::Subscript: return "subscript";
    case Catcode::Ignored: return "ignored";
    case Catcode::Space: return "space";
    case Catcode::Letter: return "letter";
    case Catcode::Other: return "other";
    case Catcode::Active: return "active";
    case Catcode::Comment: return "comment";
    case Catcode::Invalid: return "invalid";
    }
    return "?";
}

CatcodeTable::CatcodeTable() {
    ascii_.fill(Catcode::Other);
    for (char32_t c = 'a'; c <= 'z'; ++c) ascii_[c] = Catcode::Letter;
    for (char32_t c = 'A'; c <= 'Z'; ++c) ascii_[c] = Catcode::Letter;
    ascii_['\\'] = Catcode::Escape;
    ascii_['{'] = Catcode::BeginGroup;
    ascii_['}'] = Catcode::EndGroup;
    ascii_['$'] = Catcode::MathShift;
    ascii_['&'] = Catcode::AlignTab;
    ascii_['\n'] = Catcode::EndOfLine;
    ascii_['#'] = Catcode::Parameter;
    ascii_['^'] = Catcode::Superscript;
    ascii_['_'] = Catcode::Subscript;
    ascii_[' '] = Catcode::Space;
    ascii_['\t'] = Catcode::Space;
    ascii_['%'] = Catcode::Comment;
}

void CatcodeTable::set(char32_t c, Catcode cat) {
    if (c < ascii_.size()) {
        ascii_[c] = cat;
    } else if (cat == Catcode::Other) {
        wide_.erase(c);
    } else {
        wide_[c] = cat;
    }
}

Token Token::control(std::string name, SourcePos pos) {
    Token t;
    t.kind_ = TokenKind::ControlSequence;
    t.name_ = std::move(name);
    t.pos_ = pos;
    return t;
}

Token Token::character(char32_t ch, Catcode cat, SourcePos pos) {
    Token t;
    t.kind_ = TokenKind::Char;
    t.ch_ = ch;
    t.cat_ = cat;
    t.pos_ = pos;
    return t;
}

Token Token::param(int index) {
    Token t;
    t.kind_ = TokenKind::Param;
    t.param_ = index;
    return t;
}

std::string active_key(char32_t ch) {
    std::string key = "\x01";
    utf8::append(key, ch);
    return key;
}

std::string Token::binding_key() const {
    return is_control() ? name_ : active_key(ch_);
}

std::string debug_string(const TokenList& tokens) {
    std::string out = "[";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ", ";
        const Token& t = tokens[i];
        switch (t.kind()) {
        case TokenKind::ControlSequence: out += "\\" + t.name(); break;
        case TokenKind::Param: out += "#" + std::to_string(t.param_index()); break;
        case TokenKind::Char:
            if (t.is_space()) {
                out += "<sp>";
            } else {
                out += utf8::encode(t.ch());
                out += "(" + std::to_string(static_cast<int>(t.cat())) + ")";
            }
            break;
        }
    }
    return out + "]";
}

Tokenizer::Tokenizer(std::string_view source) {
    std::u32string text = utf8::decode(source);
    std::u32string line;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char32_t c = text[i];
        if (c == U'\r') {
            if (i + 1 < text.size() && text[i + 1] == U'\n') ++i;
            c = U'\n';
        }
        if (c == U'\n') {
            lines_.push_back(std::move(line));
            line.clear();
        } else {
            line.push_back(c);
        }
    }
    if (!line.empty()) lines_.push_back(std::move(line));
}

void Tokenizer::next_line(const CatcodeTable& table, TokenList& out) {
    if (at_end()) return;
    const std::u32string& line = lines_[next_line_];
    const bool final_line = next_line_ + 1 == lines_.size();
    const int lineno = static_cast<int>(++next_line_);
    auto pos_at = [lineno](std::size_t i) { return SourcePos{lineno, static_cast<int>(i) + 1}; };

    ScannerState state = ScannerState::LineStart;
    const std::size_t n = line.size();
    std::size_t i = 0;

    auto end_of_line = [&](std::size_t at) {
        switch (state) {
        case ScannerState::LineStart: out.push_back(Token::control("par", pos_at(at))); break;
        case ScannerState::MidLine: out.push_back(Token::space(pos_at(at))); break;
        case ScannerState::SkippingBlanks: break;
        }
    };

    while (i < n) {
        const char32_t c = line[i];
        const Catcode cat = table.get(c);
        switch (cat) {
        case Catcode::Escape: {
            const std::size_t start = i;
            if (i + 1 >= n) {
                if (final_line) {
                    throw Error(ErrorCode::UnterminatedControlSequence,
                                "escape character at end of input", pos_at(start));
                }
                // escape + end-of-line reads as a control space
                out.push_back(Token::control(" ", pos_at(start)));
                return;
            }
            ++i;
            if (table.get(line[i]) == Catcode::Letter) {
                std::size_t j = i;
                while (j < n && table.get(line[j]) == Catcode::Letter) ++j;
                out.push_back(Token::control(utf8::encode(std::u32string_view(line).substr(i, j - i)),
                                             pos_at(start)));
                i = j;
                state = ScannerState::SkippingBlanks;
            } else {
                const char32_t sym = line[i];
                out.push_back(Token::control(utf8::encode(sym), pos_at(start)));
                ++i;
                state = table.get(sym) == Catcode::Space ? ScannerState::SkippingBlanks
                                                         : ScannerState::MidLine;
            }
            break;
        }
        case Catcode::EndOfLine:
            end_of_line(i);
            return;
        case Catcode::Ignored:
            ++i;
            break;
        case Catcode::Space:
            if (state == ScannerState::MidLine) {
                out.push_back(Token::space(pos_at(i)));
                state = ScannerState::SkippingBlanks;
            }
            ++i;
            break;
        case Catcode::Comment:
            return;
        case Catcode::Invalid:
            throw Error(ErrorCode::InvalidCharacter,
                        "invalid character U+" + std::to_string(static_cast<unsigned>(c)), pos_at(i));
        case Catcode::Superscript:
            // ^^x character substitution is not supported
            if (i + 1 < n && line[i + 1] == c && (i + 2 < n || !final_line)) {
                throw Error(ErrorCode::InvalidCharacter, "^^ character notation is not supported",
                            pos_at(i));
            }
            [[fallthrough]];
        default:
            out.push_back(Token::character(c, cat, pos_at(i)));
            ++i;
            state = ScannerState::MidLine;
            break;
        }
    }
    if (!final_line) end_of_line(n);
}

TokenList tokenize(std::string_view source, const CatcodeTable& table) {
    Tokenizer tokenizer(source);
    TokenList out;
    while (!tokenizer.at_end()) tokenizer.next_line(table, out);
    return out;
}

std::string detokenize(const TokenList& tokens) {
    static const CatcodeTable defaults;
    std::string out;
    for (const Token& t : tokens) {
        switch (t.kind()) {
        case TokenKind::ControlSequence: {
            out += '\\';
            out += t.name();
            const std::size_t len = utf8::length(t.name());
            const bool word = len > 1 || (len == 1 && defaults.get(utf8::decode(t.name())[0]) == Catcode::Letter);
            if (word) out += ' ';
            break;
        }
        case TokenKind::Char:
            utf8::append(out, t.ch());
            break;
        case TokenKind::Param:
            out += '#';
            out += std::to_string(t.param_index());
            break;
        }
    }
    return out;
}

}  // namespace semtex
