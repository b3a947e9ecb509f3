#include "semtex/math.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "semtex/utf8.hpp"
#include "semtex/xml.hpp"

namespace semtex::math {

// ---------------------------------------------------------------------------
// MathTree

std::string_view kind_name(Kind kind) {
    switch (kind) {
    case Kind::Mi: return "mi";
    case Kind::Mn: return "mn";
    case Kind::Mo: return "mo";
    case Kind::Mrow: return "mrow";
    case Kind::Msup: return "msup";
    case Kind::Msub: return "msub";
    case Kind::Msubsup: return "msubsup";
    case Kind::Mfrac: return "mfrac";
    case Kind::Msqrt: return "msqrt";
    }
    return "?";
}

MathTree MathTree::mi(std::string text) { return MathTree(Kind::Mi, std::move(text), {}); }
MathTree MathTree::mn(std::string text) { return MathTree(Kind::Mn, std::move(text), {}); }

MathTree MathTree::mo(std::string text, bool stretchy) {
    MathTree t(Kind::Mo, std::move(text), {});
    t.stretchy_ = stretchy;
    return t;
}

MathTree MathTree::mrow(std::vector<MathTree> children) { return MathTree(Kind::Mrow, {}, std::move(children)); }

MathTree MathTree::msup(MathTree base, MathTree script) {
    std::vector<MathTree> c;
    c.push_back(std::move(base));
    c.push_back(std::move(script));
    return MathTree(Kind::Msup, {}, std::move(c));
}

MathTree MathTree::msub(MathTree base, MathTree script) {
    std::vector<MathTree> c;
    c.push_back(std::move(base));
    c.push_back(std::move(script));
    return MathTree(Kind::Msub, {}, std::move(c));
}

MathTree MathTree::msubsup(MathTree base, MathTree sub, MathTree sup) {
    std::vector<MathTree> c;
    c.push_back(std::move(base));
    c.push_back(std::move(sub));
    c.push_back(std::move(sup));
    return MathTree(Kind::Msubsup, {}, std::move(c));
}

MathTree MathTree::mfrac(MathTree num, MathTree den) {
    std::vector<MathTree> c;
    c.push_back(std::move(num));
    c.push_back(std::move(den));
    return MathTree(Kind::Mfrac, {}, std::move(c));
}

MathTree MathTree::msqrt(MathTree child) {
    std::vector<MathTree> c;
    c.push_back(std::move(child));
    return MathTree(Kind::Msqrt, {}, std::move(c));
}

bool operator==(const MathTree& a, const MathTree& b) {
    return a.kind_ == b.kind_ && a.stretchy_ == b.stretchy_ && a.text_ == b.text_ && a.children_ == b.children_;
}

std::string to_sexpr(const MathTree& tree) {
    std::string out(kind_name(tree.kind()));
    if (tree.is_leaf()) {
        out += ' ';
        out += tree.text();
        if (tree.stretchy()) out += '*';
        return out;
    }
    out += '(';
    for (std::size_t i = 0; i < tree.children().size(); ++i) {
        if (i) out += ", ";
        out += to_sexpr(tree.children()[i]);
    }
    out += ')';
    return out;
}

void collect_leaves(const MathTree& tree, std::vector<const MathTree*>& out) {
    if (tree.is_leaf()) {
        out.push_back(&tree);
        return;
    }
    for (const auto& c : tree.children()) collect_leaves(c, out);
}

// ---------------------------------------------------------------------------
// command tables

namespace {

enum class OpClass { Relation, Additive, Ordinary };

struct OpInfo {
    const char* text;
    OpClass cls;
};

const std::unordered_map<std::string_view, const char*>& greek_table() {
    static const std::unordered_map<std::string_view, const char*> table = {
        {"alpha", "α"},   {"beta", "β"},     {"gamma", "γ"},     {"delta", "δ"},      {"epsilon", "ϵ"},
        {"varepsilon", "ε"}, {"zeta", "ζ"},  {"eta", "η"},       {"theta", "θ"},      {"vartheta", "ϑ"},
        {"iota", "ι"},    {"kappa", "κ"},    {"lambda", "λ"},    {"mu", "μ"},         {"nu", "ν"},
        {"xi", "ξ"},      {"pi", "π"},       {"varpi", "ϖ"},     {"rho", "ρ"},        {"varrho", "ϱ"},
        {"sigma", "σ"},   {"varsigma", "ς"}, {"tau", "τ"},       {"upsilon", "υ"},    {"phi", "ϕ"},
        {"varphi", "φ"},  {"chi", "χ"},      {"psi", "ψ"},       {"omega", "ω"},      {"Gamma", "Γ"},
        {"Delta", "Δ"},   {"Theta", "Θ"},    {"Lambda", "Λ"},    {"Xi", "Ξ"},         {"Pi", "Π"},
        {"Sigma", "Σ"},   {"Upsilon", "Υ"},  {"Phi", "Φ"},       {"Psi", "Ψ"},        {"Omega", "Ω"},
    };
    return table;
}

const std::unordered_map<std::string_view, OpInfo>& operator_commands() {
    static const std::unordered_map<std::string_view, OpInfo> table = {
        {"leq", {"≤", OpClass::Relation}},     {"le", {"≤", OpClass::Relation}},
        {"geq", {"≥", OpClass::Relation}},     {"ge", {"≥", OpClass::Relation}},
        {"neq", {"≠", OpClass::Relation}},     {"ne", {"≠", OpClass::Relation}},
        {"approx", {"≈", OpClass::Relation}},  {"equiv", {"≡", OpClass::Relation}},
        {"sim", {"∼", OpClass::Relation}},     {"to", {"→", OpClass::Relation}},
        {"rightarrow", {"→", OpClass::Relation}}, {"in", {"∈", OpClass::Relation}},
        {"subset", {"⊂", OpClass::Relation}},  {"pm", {"±", OpClass::Additive}},
        {"mp", {"∓", OpClass::Additive}},      {"cdot", {"⋅", OpClass::Ordinary}},
        {"times", {"×", OpClass::Ordinary}},   {"div", {"÷", OpClass::Ordinary}},
        {"ldots", {"…", OpClass::Ordinary}},   {"cdots", {"⋯", OpClass::Ordinary}},
        {"sum", {"∑", OpClass::Ordinary}},     {"prod", {"∏", OpClass::Ordinary}},
        {"int", {"∫", OpClass::Ordinary}},     {"{", {"{", OpClass::Ordinary}},
        {"}", {"}", OpClass::Ordinary}},       {"|", {"‖", OpClass::Ordinary}},
        {"langle", {"⟨", OpClass::Ordinary}},  {"rangle", {"⟩", OpClass::Ordinary}},
    };
    return table;
}

const std::unordered_map<std::string_view, const char*>& identifier_commands() {
    static const std::unordered_map<std::string_view, const char*> table = {
        {"infty", "∞"}, {"partial", "∂"}, {"nabla", "∇"}, {"sin", "sin"}, {"cos", "cos"},
        {"tan", "tan"}, {"log", "log"},   {"ln", "ln"},   {"exp", "exp"}, {"lim", "lim"},
        {"max", "max"}, {"min", "min"},
    };
    return table;
}

bool is_spacing_command(std::string_view name) {
    return name == "," || name == ";" || name == "!" || name == ":" || name == " " || name == "quad" ||
           name == "qquad";
}

const char* char_operator(char32_t c, OpClass& cls) {
    switch (c) {
    case U'=': cls = OpClass::Relation; return "=";
    case U'<': cls = OpClass::Relation; return "<";
    case U'>': cls = OpClass::Relation; return ">";
    case U'+': cls = OpClass::Additive; return "+";
    case U'-': cls = OpClass::Additive; return "−";
    case U'*': cls = OpClass::Ordinary; return "∗";
    case U'/': cls = OpClass::Ordinary; return "/";
    case U',': cls = OpClass::Ordinary; return ",";
    case U';': cls = OpClass::Ordinary; return ";";
    case U':': cls = OpClass::Ordinary; return ":";
    case U'!': cls = OpClass::Ordinary; return "!";
    case U'|': cls = OpClass::Ordinary; return "|";
    case U'\'': cls = OpClass::Ordinary; return "′";
    case U'.': cls = OpClass::Ordinary; return ".";
    case U'(': cls = OpClass::Ordinary; return "(";
    case U')': cls = OpClass::Ordinary; return ")";
    case U'[': cls = OpClass::Ordinary; return "[";
    case U']': cls = OpClass::Ordinary; return "]";
    default: return nullptr;
    }
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// ---------------------------------------------------------------------------
// parser

class Parser {
public:
    Parser(const TokenList& tokens, const ParseOptions& options, std::vector<std::string>* warnings)
        : options_(options), warnings_(warnings) {
        for (const auto& t : tokens) {
            if (!t.is_space()) toks_.push_back(t);
        }
    }

    MathTree parse_all() {
        MathTree result = parse_relation();
        if (pos_ < toks_.size()) {
            // only an unmatched closer stops the top level
            throw Error(ErrorCode::UnbalancedGroup, "unmatched '}' in math", toks_[pos_].pos());
        }
        return result;
    }

private:
    const ParseOptions& options_;
    std::vector<std::string>* warnings_;
    TokenList toks_;
    std::size_t pos_ = 0;
    // closers that end the current nested construct
    std::vector<char32_t> fence_stack_;
    int right_depth_ = 0;

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& peek() const { return toks_[pos_]; }

    // True when the next token terminates the current expression.
    bool at_stop() const {
        if (at_end()) return true;
        const Token& t = peek();
        if (t.is_char(Catcode::EndGroup)) return true;
        if (t.is_control("right") && right_depth_ > 0) return true;
        if (t.is_char() && !fence_stack_.empty() && t.ch() == fence_stack_.back() &&
            t.cat() == Catcode::Other) {
            return true;
        }
        return false;
    }

    bool op_class_of(const Token& t, OpClass& cls, const char*& text) const {
        if (t.is_char(Catcode::Other)) {
            text = char_operator(t.ch(), cls);
            return text != nullptr;
        }
        if (t.is_control()) {
            auto& ops = operator_commands();
            auto it = ops.find(t.name());
            if (it != ops.end()) {
                cls = it->second.cls;
                text = it->second.text;
                return true;
            }
        }
        return false;
    }

    bool at_operator(OpClass want) const {
        if (at_stop()) return false;
        OpClass cls;
        const char* text;
        return op_class_of(peek(), cls, text) && cls == want;
    }

    static MathTree collapse(std::vector<MathTree> items) {
        if (items.size() == 1) return std::move(items.front());
        return MathTree::mrow(std::move(items));
    }

    MathTree take_operator() {
        OpClass cls;
        const char* text = nullptr;
        op_class_of(peek(), cls, text);
        ++pos_;
        return MathTree::mo(text);
    }

    MathTree parse_relation() {
        std::vector<MathTree> items;
        while (!at_stop()) {
            if (at_operator(OpClass::Relation)) {
                items.push_back(take_operator());
                continue;
            }
            items.push_back(parse_additive());
        }
        return collapse(std::move(items));
    }

    MathTree parse_additive() {
        std::vector<MathTree> items;
        while (!at_stop() && !at_operator(OpClass::Relation)) {
            if (at_operator(OpClass::Additive)) {
                items.push_back(take_operator());
                continue;
            }
            items.push_back(parse_juxtaposition());
        }
        return collapse(std::move(items));
    }

    MathTree parse_juxtaposition() {
        std::vector<MathTree> items;
        while (!at_stop() && !at_operator(OpClass::Relation) && !at_operator(OpClass::Additive)) {
            if (auto node = parse_scripted()) items.push_back(std::move(*node));
        }
        return collapse(std::move(items));
    }

    static bool is_script(const Token& t) {
        return t.is_char(Catcode::Superscript) || t.is_char(Catcode::Subscript);
    }

    std::optional<MathTree> parse_scripted() {
        std::optional<MathTree> base;
        if (is_script(peek())) {
            base = MathTree::mrow();
        } else {
            base = parse_primary();
            if (!base) return std::nullopt;
        }
        std::optional<MathTree> sup;
        std::optional<MathTree> sub;
        while (!at_end() && is_script(peek())) {
            const Token script = peek();
            const bool is_sup = script.is_char(Catcode::Superscript);
            std::optional<MathTree>& slot = is_sup ? sup : sub;
            if (slot) {
                throw Error(ErrorCode::UnbalancedScripts,
                            is_sup ? "double superscript" : "double subscript", script.pos());
            }
            ++pos_;
            if (at_end()) {
                throw Error(ErrorCode::UnbalancedScripts, "missing script argument", script.pos());
            }
            slot = parse_argument();
        }
        if (sup && sub) return MathTree::msubsup(std::move(*base), std::move(*sub), std::move(*sup));
        if (sup) return MathTree::msup(std::move(*base), std::move(*sup));
        if (sub) return MathTree::msub(std::move(*base), std::move(*sub));
        return base;
    }

    // Brace group, or a single token (a single digit, not a digit run).
    MathTree parse_argument() {
        if (at_end()) throw Error(ErrorCode::UnbalancedScripts, "missing argument in math");
        const Token& t = peek();
        if (t.is_char(Catcode::BeginGroup)) return parse_group();
        if (t.is_char(Catcode::Other) && is_digit(t.ch())) {
            ++pos_;
            return MathTree::mn(utf8::encode(t.ch()));
        }
        if (is_script(t) || t.is_char(Catcode::EndGroup)) {
            throw Error(ErrorCode::UnbalancedScripts, "missing argument in math", t.pos());
        }
        auto node = parse_primary();
        return node ? std::move(*node) : MathTree::mrow();
    }

    MathTree parse_group() {
        const Token open = peek();
        ++pos_;
        auto saved_fences = std::move(fence_stack_);
        fence_stack_.clear();
        const int saved_right = right_depth_;
        right_depth_ = 0;
        MathTree inner = parse_relation();
        fence_stack_ = std::move(saved_fences);
        right_depth_ = saved_right;
        if (at_end() || !peek().is_char(Catcode::EndGroup)) {
            throw Error(ErrorCode::UnbalancedGroup, "missing '}' in math", open.pos());
        }
        ++pos_;
        return inner;
    }

    // Index of the matching closer for an open paren/bracket at pos_, or npos.
    std::size_t find_closer(char32_t open, char32_t close) const {
        int depth = 0;
        int braces = 0;
        for (std::size_t i = pos_ + 1; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.is_char(Catcode::BeginGroup)) ++braces;
            if (t.is_char(Catcode::EndGroup)) {
                if (braces == 0) return std::string::npos;
                --braces;
            }
            if (braces > 0 || !t.is_char(Catcode::Other)) continue;
            if (t.ch() == open) ++depth;
            if (t.ch() == close) {
                if (depth == 0) return i;
                --depth;
            }
        }
        return std::string::npos;
    }

    MathTree parse_fenced(char32_t close) {
        MathTree open_mo = take_operator();
        fence_stack_.push_back(close);
        MathTree inner = parse_relation();
        fence_stack_.pop_back();
        MathTree close_mo = take_operator();
        std::vector<MathTree> items;
        items.push_back(std::move(open_mo));
        if (!(inner.kind() == Kind::Mrow && inner.children().empty())) items.push_back(std::move(inner));
        items.push_back(std::move(close_mo));
        return MathTree::mrow(std::move(items));
    }

    std::string delimiter_text(const Token& t) {
        if (t.is_char(Catcode::Other)) {
            if (t.ch() == U'.') return "";
            return utf8::encode(t.ch());
        }
        if (t.is_control()) {
            auto& ops = operator_commands();
            auto it = ops.find(t.name());
            if (it != ops.end()) return it->second.text;
        }
        throw Error(ErrorCode::UnbalancedScripts, "bad delimiter after \\left or \\right", t.pos());
    }

    MathTree parse_left_right() {
        const Token left = peek();
        ++pos_;
        if (at_end()) throw Error(ErrorCode::UnbalancedScripts, "missing delimiter after \\left", left.pos());
        MathTree open = MathTree::mo(delimiter_text(peek()), true);
        ++pos_;
        auto saved_fences = std::move(fence_stack_);
        fence_stack_.clear();
        ++right_depth_;
        MathTree inner = parse_relation();
        --right_depth_;
        fence_stack_ = std::move(saved_fences);
        if (at_end() || !peek().is_control("right")) {
            throw Error(ErrorCode::UnbalancedScripts, "\\left without matching \\right", left.pos());
        }
        ++pos_;
        if (at_end()) throw Error(ErrorCode::UnbalancedScripts, "missing delimiter after \\right", left.pos());
        MathTree close = MathTree::mo(delimiter_text(peek()), true);
        ++pos_;
        std::vector<MathTree> items;
        items.push_back(std::move(open));
        if (!(inner.kind() == Kind::Mrow && inner.children().empty())) items.push_back(std::move(inner));
        items.push_back(std::move(close));
        return MathTree::mrow(std::move(items));
    }

    std::optional<MathTree> parse_primary() {
        const Token t = peek();
        if (t.is_char(Catcode::BeginGroup)) return parse_group();
        if (t.is_char(Catcode::Letter)) {
            ++pos_;
            return MathTree::mi(utf8::encode(t.ch()));
        }
        if (t.is_char(Catcode::Other) && is_digit(t.ch())) {
            std::string digits;
            while (!at_end()) {
                const Token& d = peek();
                if (d.is_char(Catcode::Other) && is_digit(d.ch())) {
                    utf8::append(digits, d.ch());
                    ++pos_;
                } else if (d.is_char(U'.', Catcode::Other) && pos_ + 1 < toks_.size() &&
                           toks_[pos_ + 1].is_char(Catcode::Other) && is_digit(toks_[pos_ + 1].ch())) {
                    digits += '.';
                    ++pos_;
                } else {
                    break;
                }
            }
            return MathTree::mn(std::move(digits));
        }
        if (t.is_char(Catcode::Other)) {
            if (t.ch() == U'(' || t.ch() == U'[') {
                const char32_t close = t.ch() == U'(' ? U')' : U']';
                if (find_closer(t.ch(), close) != std::string::npos) return parse_fenced(close);
            }
            OpClass cls;
            if (const char* text = char_operator(t.ch(), cls)) {
                ++pos_;
                return MathTree::mo(text);
            }
            ++pos_;
            return MathTree::mi(utf8::encode(t.ch()));
        }
        if (t.is_control()) return parse_command(t);
        // alignment, parameter and other stray characters
        ++pos_;
        return MathTree::mo(utf8::encode(t.ch()));
    }

    std::optional<MathTree> parse_command(const Token& t) {
        const std::string& name = t.name();
        if (name == "frac") {
            ++pos_;
            MathTree num = parse_argument();
            MathTree den = parse_argument();
            return MathTree::mfrac(std::move(num), std::move(den));
        }
        if (name == "sqrt") {
            ++pos_;
            return MathTree::msqrt(parse_argument());
        }
        if (name == "left") return parse_left_right();
        if (name == "right") {
            throw Error(ErrorCode::UnbalancedScripts, "\\right without matching \\left", t.pos());
        }
        if (is_spacing_command(name)) {
            ++pos_;
            return std::nullopt;
        }
        auto g = greek_letter(name);
        if (!g.empty()) {
            ++pos_;
            return MathTree::mi(std::move(g));
        }
        auto& ids = identifier_commands();
        if (auto it = ids.find(name); it != ids.end()) {
            ++pos_;
            return MathTree::mi(it->second);
        }
        auto& ops = operator_commands();
        if (auto it = ops.find(name); it != ops.end()) {
            ++pos_;
            return MathTree::mo(it->second.text);
        }
        if (options_.strict) {
            throw Error(ErrorCode::UnknownMathCommand, "unknown math command \\" + name, t.pos());
        }
        if (warnings_) warnings_->push_back("unknown math command \\" + name);
        ++pos_;
        return MathTree::mo("\\" + name);
    }
};

void append_mathml(Element& parent, const MathTree& tree) {
    Element e(std::string(kind_name(tree.kind())));
    if (tree.is_leaf()) {
        if (tree.stretchy()) e.attrs.push_back({"stretchy", "true"});
        if (!tree.text().empty()) e.children.emplace_back(Text{tree.text()});
    } else {
        for (const auto& c : tree.children()) append_mathml(e, c);
    }
    parent.children.emplace_back(std::move(e));
}

}  // namespace

std::string greek_letter(std::string_view name) {
    auto& g = greek_table();
    auto it = g.find(name);
    return it == g.end() ? std::string() : std::string(it->second);
}

bool is_math_command(std::string_view name) {
    return name == "frac" || name == "sqrt" || name == "left" || name == "right" || is_spacing_command(name) ||
           greek_table().contains(name) || operator_commands().contains(name) ||
           identifier_commands().contains(name);
}

std::vector<std::string> math_command_names() {
    std::vector<std::string> out = {"frac", "sqrt", "left", "right", ",", ";", "!", ":", " ", "quad", "qquad"};
    for (const auto& [name, text] : greek_table()) out.emplace_back(name);
    for (const auto& [name, info] : operator_commands()) out.emplace_back(name);
    for (const auto& [name, text] : identifier_commands()) out.emplace_back(name);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MathTree parse_math(const TokenList& tokens, const ParseOptions& options, std::vector<std::string>* warnings) {
    Parser parser(tokens, options, warnings);
    return parser.parse_all();
}

Element mathml_serialize(const MathTree& tree, MathDisplay display) {
    Element math("math", {{"xmlns", std::string(xml::kMathMLNamespace)},
                          {"display", display == MathDisplay::Block ? "block" : "inline"}});
    append_mathml(math, tree);
    return math;
}

}  // namespace semtex::math
