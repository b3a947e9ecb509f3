#include "semtex/binding.hpp"

#include "semtex/schema.hpp"

namespace semtex {

ArgSpec::ArgSpec(std::vector<ParamDesc> items) : items_(std::move(items)) {
    for (const auto& item : items_) {
        if (item.kind != ParamDesc::Kind::LiteralMatch) ++arity_;
        if (item.kind != ParamDesc::Kind::Undelimited && item.tokens.empty()) {
            throw Error(ErrorCode::BadParameterIndex, "empty delimiter in parameter text");
        }
    }
    if (arity_ > 9) throw Error(ErrorCode::BadParameterIndex, "more than 9 parameters");
}

ArgSpec ArgSpec::undelimited(int n) {
    return ArgSpec(std::vector<ParamDesc>(static_cast<std::size_t>(n), ParamDesc{}));
}

ArgSpec ArgSpec::parse(const TokenList& text) {
    std::vector<ParamDesc> items;
    TokenList pending;
    int params = 0;

    auto flush = [&] {
        if (params == 0) {
            if (!pending.empty()) items.push_back({ParamDesc::Kind::LiteralMatch, std::move(pending)});
        } else if (pending.empty()) {
            items.push_back({ParamDesc::Kind::Undelimited, {}});
        } else {
            items.push_back({ParamDesc::Kind::Delimited, std::move(pending)});
        }
        pending.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const Token& t = text[i];
        int number = 0;
        if (t.is_param()) {
            number = t.param_index();
        } else if (t.is_char(Catcode::Parameter)) {
            if (i + 1 >= text.size()) {
                throw Error(ErrorCode::BadParameterIndex, "parameter character at end of parameter text", t.pos());
            }
            const Token& d = text[++i];
            if (!d.is_char() || d.ch() < U'1' || d.ch() > U'9') {
                throw Error(ErrorCode::BadParameterIndex, "parameters must be numbered #1 to #9", t.pos());
            }
            number = static_cast<int>(d.ch() - U'0');
        } else {
            pending.push_back(t);
            continue;
        }
        if (number != params + 1) {
            throw Error(ErrorCode::BadParameterIndex,
                        "parameters must be numbered consecutively (got #" + std::to_string(number) + ")", t.pos());
        }
        flush();
        ++params;
    }
    flush();
    return ArgSpec(std::move(items));
}

void check_macro(const ArgSpec& spec, const TokenList& body) {
    for (const auto& t : body) {
        if (t.is_param() && (t.param_index() < 1 || t.param_index() > spec.arity())) {
            throw Error(ErrorCode::BadParameterIndex,
                        "illegal parameter number #" + std::to_string(t.param_index()) + " in definition", t.pos());
        }
    }
}

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConstructorTemplateInvalid, msg); }

bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == ':' || c == '_' ||
           c == '-' || c == '.';
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class TemplateParser {
public:
    TemplateParser(std::string_view s, int arity) : s_(s), arity_(arity) {}

    std::vector<TemplateItem> run() {
        while (i_ < s_.size()) {
            const char c = s_[i_];
            if (c == '<') {
                flush_text();
                if (i_ + 1 < s_.size() && s_[i_ + 1] == '/') {
                    close_tag();
                } else {
                    open_tag();
                }
            } else if (c == '#') {
                flush_text();
                insertion();
            } else if (c == '&') {
                text_ += entity();
            } else {
                text_ += c;
                ++i_;
            }
        }
        flush_text();
        if (!open_.empty()) invalid("element '" + open_.back() + "' is never closed");
        return std::move(items_);
    }

private:
    std::string_view s_;
    int arity_;
    std::size_t i_ = 0;
    std::string text_;
    std::vector<std::string> open_;
    std::vector<TemplateItem> items_;

    void flush_text() {
        bool blank = true;
        for (char c : text_) blank = blank && is_ws(c);
        if (!text_.empty() && !blank) {
            TemplateItem item;
            item.kind = TemplateItem::Kind::LiteralText;
            item.text = text_;
            items_.push_back(std::move(item));
        }
        text_.clear();
    }

    int arg_number() {
        if (i_ >= s_.size() || s_[i_] < '1' || s_[i_] > '9') invalid("'#' must be followed by an argument number");
        const int n = s_[i_] - '0';
        ++i_;
        if (n > arity_) {
            invalid("argument #" + std::to_string(n) + " exceeds arity " + std::to_string(arity_));
        }
        return n;
    }

    void insertion() {
        ++i_;  // '#'
        TemplateItem item;
        item.kind = TemplateItem::Kind::ArgInsert;
        if (i_ < s_.size() && s_[i_] == '*') {
            item.mode = InsertMode::VerbatimText;
            ++i_;
        }
        item.arg = arg_number();
        items_.push_back(std::move(item));
    }

    std::string entity() {
        static const std::pair<std::string_view, std::string_view> kEntities[] = {
            {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}};
        for (auto [name, value] : kEntities) {
            if (s_.substr(i_, name.size()) == name) {
                i_ += name.size();
                return std::string(value);
            }
        }
        invalid("unknown entity in template");
    }

    std::string read_name() {
        const std::size_t start = i_;
        while (i_ < s_.size() && name_char(s_[i_])) ++i_;
        if (start == i_) invalid("expected a name in template tag");
        return std::string(s_.substr(start, i_ - start));
    }

    void skip_ws() {
        while (i_ < s_.size() && is_ws(s_[i_])) ++i_;
    }

    void expect(char c) {
        if (i_ >= s_.size() || s_[i_] != c) invalid(std::string("expected '") + c + "' in template tag");
        ++i_;
    }

    void open_tag() {
        ++i_;  // '<'
        TemplateItem item;
        item.kind = TemplateItem::Kind::ElementOpen;
        item.name = read_name();
        const schema::ElementSpec* spec = schema::find(item.name);
        if (!spec) invalid("element '" + item.name + "' is not in the vocabulary");
        for (;;) {
            skip_ws();
            if (i_ >= s_.size()) invalid("unterminated tag '" + item.name + "'");
            if (s_[i_] == '>' || s_[i_] == '/') break;
            AttrTemplate attr;
            attr.name = read_name();
            bool known = false;
            for (const auto& rule : spec->attrs) known = known || rule.name == attr.name;
            if (!known) invalid("attribute '" + attr.name + "' not allowed on '" + item.name + "'");
            for (const auto& other : item.attrs) {
                if (other.name == attr.name) invalid("duplicate attribute '" + attr.name + "'");
            }
            skip_ws();
            expect('=');
            skip_ws();
            if (i_ >= s_.size() || (s_[i_] != '"' && s_[i_] != '\'')) invalid("attribute value must be quoted");
            const char quote = s_[i_++];
            std::string literal;
            for (;;) {
                if (i_ >= s_.size()) invalid("unterminated attribute value");
                const char c = s_[i_];
                if (c == quote) {
                    ++i_;
                    break;
                }
                if (c == '#') {
                    ++i_;
                    if (!literal.empty()) attr.parts.push_back({std::move(literal), 0});
                    literal.clear();
                    attr.parts.push_back({{}, arg_number()});
                } else if (c == '&') {
                    literal += entity();
                } else if (c == '<') {
                    invalid("'<' inside attribute value");
                } else {
                    literal += c;
                    ++i_;
                }
            }
            if (!literal.empty()) attr.parts.push_back({std::move(literal), 0});
            item.attrs.push_back(std::move(attr));
        }
        const bool self_closing = s_[i_] == '/';
        if (self_closing) ++i_;
        expect('>');
        const std::string name = item.name;
        items_.push_back(std::move(item));
        if (self_closing) {
            TemplateItem close;
            close.kind = TemplateItem::Kind::ElementClose;
            close.name = name;
            items_.push_back(std::move(close));
        } else {
            open_.push_back(name);
        }
    }

    void close_tag() {
        i_ += 2;  // "</"
        TemplateItem item;
        item.kind = TemplateItem::Kind::ElementClose;
        item.name = read_name();
        skip_ws();
        expect('>');
        if (open_.empty() || open_.back() != item.name) {
            invalid("closing tag '" + item.name + "' does not match " +
                    (open_.empty() ? std::string("any open element") : "'" + open_.back() + "'"));
        }
        open_.pop_back();
        items_.push_back(std::move(item));
    }
};

}  // namespace

ConstructorTemplate ConstructorTemplate::parse(std::string_view surface, int arity) {
    ConstructorTemplate t;
    t.items_ = TemplateParser(surface, arity).run();
    return t;
}

std::optional<std::string> ConstructorTemplate::first_element() const {
    for (const auto& item : items_) {
        if (item.kind == TemplateItem::Kind::ElementOpen) return item.name;
        if (item.kind != TemplateItem::Kind::ElementClose) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace semtex
