// Input handling, expansion, scanning and assignment primitives.
#include <cctype>

#include "engine_impl.hpp"
#include "semtex/utf8.hpp"

namespace semtex {

namespace {

constexpr std::int64_t kInfinity = 2147483647;  // largest |integer|
// Nested isolated digestion recurses on the C++ stack.
constexpr std::size_t kMaxIsolation = 400;

std::string cs_text(const Token& t) {
    if (t.is_control()) return "\\" + t.name();
    return utf8::encode(t.ch());
}

int digit_value(const Token& t, int radix) {
    if (!t.is_char(Catcode::Other) && !t.is_char(Catcode::Letter)) return -1;
    const char32_t c = t.ch();
    if (c >= U'0' && c <= U'9' && t.cat() == Catcode::Other) {
        const int d = static_cast<int>(c - U'0');
        return d < radix ? d : -1;
    }
    if (radix == 16 && c >= U'A' && c <= U'F') return static_cast<int>(c - U'A') + 10;
    return -1;
}

// x * n / d for non-negative x, with the remainder.
std::int64_t xn_over_d(std::int64_t x, std::int64_t n, std::int64_t d, std::int64_t* rem = nullptr) {
    const std::int64_t p = x * n;
    if (rem) *rem = p % d;
    return p / d;
}

std::int64_t nx_plus_y(std::int64_t n, std::int64_t x, std::int64_t y, SourcePos pos) {
    const std::int64_t r = n * x + y;
    if (r > kMaxDimen || r < -kMaxDimen) throw Error(ErrorCode::NumberTooLarge, "dimension too large", pos);
    return r;
}

struct Unit {
    std::string_view name;
    std::int64_t num;
    std::int64_t den;
};

constexpr Unit kUnits[] = {
    {"in", 7227, 100}, {"pc", 12, 1},     {"cm", 7227, 254},    {"mm", 7227, 2540},
    {"bp", 7227, 7200}, {"dd", 1238, 1157}, {"cc", 14856, 1157},
};

}  // namespace

std::string profile_name(const Token& t) { return cs_text(t); }

Engine::Impl::Impl(std::shared_ptr<const Registry> registry, ConvertOptions options, std::shared_ptr<Profiler> shared)
    : opts(std::move(options)),
      profiler_owner(shared ? shared : std::make_shared<Profiler>(opts.profile, opts.profile_clock)),
      profiler(*profiler_owner),
      toplevel_frame(shared ? 0 : profiler.enter(Profiler::kTopLevel)),
      state(std::move(registry)),
      relax_binding(std::make_shared<const Binding>(PrimitiveBinding{"relax"})) {
    open.emplace_back("document");
}

// ---------------------------------------------------------------------------
// input

void Engine::Impl::check_deadline() {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
        throw Error(ErrorCode::Timeout, "conversion exceeded its time limit", last_pos);
    }
}

std::optional<Token> Engine::Impl::next_raw() {
    if ((++reads & 4095) == 0) check_deadline();
    for (;;) {
        if (!input.empty()) {
            InputLevel& lvl = input.back();
            if (lvl.pos < lvl.tokens.size()) {
                Token t = std::move(lvl.tokens[lvl.pos++]);
                // levels are dropped as soon as they are used up, so tail
                // recursion does not deepen the stack
                if (lvl.pos == lvl.tokens.size()) pop_level();
                if (t.pos().known()) last_pos = t.pos();
                return t;
            }
            pop_level();
            continue;
        }
        if (source && !source->at_end()) {
            TokenList line;
            source->next_line(state.catcodes(), line);
            if (!line.empty()) input.push_back({std::move(line), 0, 0});
            continue;
        }
        return std::nullopt;
    }
}

void Engine::Impl::pop_level() {
    const Profiler::FrameId frame = input.back().frame;
    input.pop_back();
    if (frame) profiler.leave(frame);
}

void Engine::Impl::push_level(TokenList tokens, Profiler::FrameId frame) {
    if (tokens.empty()) {
        if (frame) profiler.leave(frame);
        return;
    }
    if (input.size() + outer_levels >= opts.max_expansion_depth) {
        throw Error(ErrorCode::ExpansionDepthExceeded,
                    "input stack exceeded " + std::to_string(opts.max_expansion_depth) + " levels", last_pos);
    }
    input.push_back({std::move(tokens), 0, frame});
}

void Engine::Impl::back_input(Token t) {
    if (!input.empty() && input.back().pos > 0) {
        InputLevel& lvl = input.back();
        lvl.tokens[--lvl.pos] = std::move(t);
        return;
    }
    input.push_back({TokenList{std::move(t)}, 0, 0});
}

void Engine::Impl::back_input(const TokenList& tokens) {
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) back_input(*it);
}

bool Engine::Impl::input_empty() const {
    for (const auto& lvl : input) {
        if (lvl.pos < lvl.tokens.size()) return false;
    }
    return !source || source->at_end();
}

Engine::Impl::Isolated::Isolated(Impl& e, TokenList tokens) : e_(e) {
    if (e.isolation >= kMaxIsolation) {
        throw Error(ErrorCode::ExpansionDepthExceeded, "arguments nested too deeply", e.last_pos);
    }
    ++e.isolation;
    saved_input_.swap(e.input);
    saved_source_ = std::move(e.source);
    e.outer_levels += saved_input_.size();
    if (!tokens.empty()) e.input.push_back({std::move(tokens), 0, 0});
}

Engine::Impl::Isolated::~Isolated() {
    while (!e_.input.empty()) e_.pop_level();
    e_.outer_levels -= saved_input_.size();
    e_.input = std::move(saved_input_);
    e_.source = std::move(saved_source_);
    --e_.isolation;
}

TokenList Engine::Impl::Isolated::rest() {
    TokenList out;
    while (auto t = e_.next_raw()) out.push_back(std::move(*t));
    return out;
}

// ---------------------------------------------------------------------------
// expansion

const Binding* Engine::Impl::meaning(const Token& t) const {
    if (!t.is_definable()) return nullptr;
    return state.lookup(t.binding_key()).get();
}

const Engine::Impl::PrimitiveInfo* Engine::Impl::primitive_info(const Binding* b) const {
    if (!b) return nullptr;
    const auto* p = std::get_if<PrimitiveBinding>(b);
    if (!p) return nullptr;
    auto it = primitives().find(p->id);
    return it == primitives().end() ? nullptr : &it->second;
}

bool Engine::Impl::is_primitive(const Token& t, Handler h) const {
    const PrimitiveInfo* info = primitive_info(meaning(t));
    return info && info->handler == h;
}

bool Engine::Impl::is_expandable(const Binding* b) const {
    if (!b) return false;
    if (const auto* m = std::get_if<MacroBinding>(b)) return m->expandable;
    const PrimitiveInfo* info = primitive_info(b);
    return info && info->expandable;
}

void Engine::Impl::expand(const Token& head, const Binding& b) {
    if (const auto* m = std::get_if<MacroBinding>(&b)) {
        expand_macro(head, *m);
        return;
    }
    const PrimitiveInfo* info = primitive_info(&b);
    const auto frame = profiler.enter(profile_name(head));
    (this->*info->handler)(head);
    profiler.leave(frame);
}

std::optional<Token> Engine::Impl::next_expanded() {
    for (;;) {
        auto t = next_raw();
        if (!t || t->noexpand()) return t;
        const Binding* b = meaning(*t);
        if (b && is_expandable(b)) {
            expand(*t, *b);
            continue;
        }
        return t;
    }
}

std::optional<Token> Engine::Impl::next_nonblank_expanded() {
    for (;;) {
        auto t = next_expanded();
        if (!t || !t->is_space()) return t;
    }
}

Token Engine::Impl::need_nonblank(std::string_view what) {
    auto t = next_nonblank_expanded();
    if (!t) throw Error(ErrorCode::MissingArgument, std::string(what) + " (end of input)", last_pos);
    return *t;
}

bool Engine::Impl::expand_step() {
    auto t = next_raw();
    if (!t) return false;
    const Binding* b = t->noexpand() ? nullptr : meaning(*t);
    if (b && is_expandable(b)) {
        expand(*t, *b);
        return true;
    }
    back_input(std::move(*t));
    return false;
}

TokenList Engine::Impl::expand_rest() {
    TokenList out;
    while (auto t = next_raw()) {
        if (t->noexpand()) {
            t->set_noexpand(false);
            out.push_back(std::move(*t));
            continue;
        }
        const Binding* b = meaning(*t);
        if (!b) {
            if (t->is_definable()) {
                if (opts.strict) {
                    throw Error(ErrorCode::UndefinedControlSequence, "undefined control sequence " + cs_text(*t),
                                t->pos());
                }
                warn("undefined control sequence " + cs_text(*t), t->pos());
            }
            out.push_back(std::move(*t));
            continue;
        }
        if (!is_expandable(b)) {
            out.push_back(std::move(*t));
            continue;
        }
        if (is_primitive(*t, &Impl::p_the)) {
            // \the's result is not expanded again
            const auto frame = profiler.enter(profile_name(*t));
            TokenList r = the_tokens(*t);
            profiler.leave(frame);
            out.insert(out.end(), r.begin(), r.end());
            continue;
        }
        expand(*t, *b);
    }
    return out;
}

TokenList Engine::Impl::read_balanced(const Token& head) {
    TokenList out;
    int depth = 1;
    for (;;) {
        auto t = next_raw();
        if (!t) {
            throw Error(ErrorCode::RunawayArgument, "file ended while scanning an argument of " + cs_text(head),
                        head.pos());
        }
        if (t->is_char(Catcode::BeginGroup)) {
            ++depth;
        } else if (t->is_char(Catcode::EndGroup) && --depth == 0) {
            return out;
        }
        out.push_back(std::move(*t));
    }
}

TokenList Engine::Impl::read_undelimited(const Token& head) {
    for (;;) {
        auto t = next_raw();
        if (!t) {
            throw Error(ErrorCode::RunawayArgument, "file ended while scanning use of " + cs_text(head), head.pos());
        }
        if (t->is_space()) continue;
        if (t->is_char(Catcode::BeginGroup)) return read_balanced(head);
        if (t->is_char(Catcode::EndGroup)) {
            throw Error(ErrorCode::MissingArgument, "argument of " + cs_text(head) + " has an extra }", t->pos());
        }
        return {std::move(*t)};
    }
}

TokenList Engine::Impl::read_delimited(const Token& head, const TokenList& delimiter) {
    TokenList arg;
    std::vector<bool> outer;  // token was read at brace depth 0
    int depth = 0;
    for (;;) {
        auto t = next_raw();
        if (!t) {
            throw Error(ErrorCode::RunawayArgument, "file ended while scanning use of " + cs_text(head), head.pos());
        }
        if (depth == 0 && t->is_char(Catcode::EndGroup)) {
            throw Error(ErrorCode::MissingArgument, "argument of " + cs_text(head) + " has an extra }", t->pos());
        }
        outer.push_back(depth == 0);
        if (t->is_char(Catcode::BeginGroup)) ++depth;
        if (t->is_char(Catcode::EndGroup)) --depth;
        arg.push_back(std::move(*t));
        if (depth != 0 || arg.size() < delimiter.size()) continue;
        const std::size_t start = arg.size() - delimiter.size();
        bool match = true;
        for (std::size_t i = 0; i < delimiter.size() && match; ++i) {
            match = outer[start + i] && arg[start + i] == delimiter[i];
        }
        if (!match) continue;
        arg.resize(start);
        break;
    }
    // {abc} as the whole argument loses its braces
    if (arg.size() >= 2 && arg.front().is_char(Catcode::BeginGroup) && arg.back().is_char(Catcode::EndGroup)) {
        int d = 0;
        bool whole = true;
        for (std::size_t i = 0; i + 1 < arg.size() && whole; ++i) {
            if (arg[i].is_char(Catcode::BeginGroup)) ++d;
            if (arg[i].is_char(Catcode::EndGroup)) --d;
            whole = d > 0;
        }
        if (whole) arg = TokenList(arg.begin() + 1, arg.end() - 1);
    }
    return arg;
}

std::vector<TokenList> Engine::Impl::read_arguments(const Token& head, const ArgSpec& spec) {
    std::vector<TokenList> args;
    for (const auto& item : spec.items()) {
        switch (item.kind) {
        case ParamDesc::Kind::LiteralMatch:
            for (const Token& want : item.tokens) {
                auto t = next_raw();
                if (!t) {
                    throw Error(ErrorCode::RunawayArgument, "file ended while scanning use of " + cs_text(head),
                                head.pos());
                }
                if (!(*t == want)) {
                    throw Error(ErrorCode::MissingArgument, "use of " + cs_text(head) + " doesn't match its definition",
                                t->pos().known() ? t->pos() : head.pos());
                }
            }
            break;
        case ParamDesc::Kind::Undelimited: args.push_back(read_undelimited(head)); break;
        case ParamDesc::Kind::Delimited: args.push_back(read_delimited(head, item.tokens)); break;
        }
    }
    return args;
}

void Engine::Impl::expand_macro(const Token& head, const MacroBinding& m) {
    const auto frame = profiler.enter(profile_name(head));
    std::vector<TokenList> args;
    try {
        args = read_arguments(head, m.spec);
    } catch (...) {
        profiler.leave(frame);
        throw;
    }
    TokenList body;
    body.reserve(m.body.size());
    for (const Token& t : m.body) {
        if (t.is_param()) {
            const TokenList& a = args.at(static_cast<std::size_t>(t.param_index() - 1));
            body.insert(body.end(), a.begin(), a.end());
        } else {
            body.push_back(t);
        }
    }
    push_level(std::move(body), frame);
}

// ---------------------------------------------------------------------------
// conditionals

void Engine::Impl::conditional(bool value) {
    if (value) {
        conds.push_back(Branch::True);
    } else if (skip_conditional(true)) {
        conds.push_back(Branch::Else);
    }
}

// Skips to the matching \else (when allowed) or \fi; true when stopped at \else.
bool Engine::Impl::skip_conditional(bool stop_at_else) {
    int nest = 0;
    for (;;) {
        auto t = next_raw();
        if (!t) throw Error(ErrorCode::UnbalancedConditional, "end of input while skipping conditional text", last_pos);
        const PrimitiveInfo* info = primitive_info(meaning(*t));
        if (!info) continue;
        if (info->conditional) {
            ++nest;
        } else if (info->handler == &Impl::p_fi) {
            if (nest == 0) return false;
            --nest;
        } else if (info->handler == &Impl::p_else && nest == 0 && stop_at_else) {
            return true;
        }
    }
}

void Engine::Impl::p_else(const Token& head) {
    if (conds.empty() || conds.back() != Branch::True) {
        throw Error(ErrorCode::UnbalancedConditional, "extra \\else", head.pos());
    }
    conds.pop_back();
    skip_conditional(false);
}

void Engine::Impl::p_fi(const Token& head) {
    if (conds.empty()) throw Error(ErrorCode::UnbalancedConditional, "extra \\fi", head.pos());
    conds.pop_back();
}

char32_t Engine::Impl::relation(const Token& head) {
    Token t = need_nonblank("missing relation for " + cs_text(head));
    if (t.is_char(U'<', Catcode::Other) || t.is_char(U'=', Catcode::Other) || t.is_char(U'>', Catcode::Other)) {
        return t.ch();
    }
    throw Error(ErrorCode::MissingArgument, "missing = inserted for " + cs_text(head), t.pos());
}

namespace {

bool compare(std::int64_t a, char32_t rel, std::int64_t b) {
    return rel == U'<' ? a < b : rel == U'>' ? a > b : a == b;
}

}  // namespace

void Engine::Impl::p_ifnum(const Token& head) {
    const std::int64_t a = scan_int();
    const char32_t rel = relation(head);
    const std::int64_t b = scan_int();
    conditional(compare(a, rel, b));
}

void Engine::Impl::p_ifdim(const Token& head) {
    const std::int64_t a = scan_dimension().sp();
    const char32_t rel = relation(head);
    const std::int64_t b = scan_dimension().sp();
    conditional(compare(a, rel, b));
}

void Engine::Impl::p_ifx(const Token& head) {
    auto t1 = next_raw();
    auto t2 = t1 ? next_raw() : std::nullopt;
    if (!t2) throw Error(ErrorCode::MissingArgument, "\\ifx needs two tokens", head.pos());
    // characters compare by code and category, everything else by meaning
    auto resolve = [&](const Token& t, const Binding*& b, std::optional<Token>& ch) {
        if (!t.is_definable()) {
            ch = t;
            return;
        }
        b = meaning(t);
        if (const auto* c = b ? std::get_if<CharBinding>(b) : nullptr) {
            ch = c->token;
            b = nullptr;
        }
    };
    const Binding* b1 = nullptr;
    const Binding* b2 = nullptr;
    std::optional<Token> c1, c2;
    resolve(*t1, b1, c1);
    resolve(*t2, b2, c2);
    bool equal;
    if (c1 || c2) {
        equal = c1 && c2 && *c1 == *c2;
    } else if (!b1 || !b2) {
        equal = !b1 && !b2;
    } else {
        equal = *b1 == *b2;
    }
    conditional(equal);
}

void Engine::Impl::p_if(const Token& head) {
    auto code = [&](const std::optional<Token>& t) -> std::int64_t {
        if (!t) throw Error(ErrorCode::MissingArgument, "\\if needs two tokens", head.pos());
        if (t->is_char() && !t->is_char(Catcode::Active)) return t->ch();
        if (const auto* c = std::get_if<CharBinding>(meaning(*t) ? meaning(*t) : relax_binding.get())) {
            return c->token.ch();
        }
        return 0x110000;  // all control sequences compare equal
    };
    const auto a = code(next_expanded());
    const auto b = code(next_expanded());
    conditional(a == b);
}

void Engine::Impl::p_iftrue(const Token&) { conditional(true); }
void Engine::Impl::p_iffalse(const Token&) { conditional(false); }

// ---------------------------------------------------------------------------
// numbers and dimensions

std::int64_t Engine::Impl::scan_digits(const Token& first, int radix) {
    std::int64_t v = digit_value(first, radix);
    if (v < 0) throw Error(ErrorCode::MissingArgument, "missing number", first.pos());
    for (;;) {
        auto t = next_expanded();
        if (!t) break;
        const int d = digit_value(*t, radix);
        if (d < 0) {
            if (!t->is_space()) back_input(std::move(*t));
            break;
        }
        v = v * radix + d;
        if (v > kInfinity) throw Error(ErrorCode::NumberTooLarge, "number too big", t->pos());
    }
    return v;
}

std::optional<std::int64_t> Engine::Impl::internal_int(const Token& t) {
    const PrimitiveInfo* info = primitive_info(meaning(t));
    if (!info) return std::nullopt;
    if (info->handler == &Impl::p_count) return state.count(scan_register_index());
    if (info->handler == &Impl::p_dimen) return state.dimen(scan_register_index()).sp();
    if (info->handler == &Impl::p_catcode) return static_cast<std::int64_t>(state.catcodes().get(scan_char_code()));
    return std::nullopt;
}

std::int32_t Engine::Impl::scan_int() {
    bool negative = false;
    Token t = need_nonblank("missing number");
    while (t.is_char(U'-', Catcode::Other) || t.is_char(U'+', Catcode::Other)) {
        if (t.ch() == U'-') negative = !negative;
        t = need_nonblank("missing number");
    }
    std::int64_t v;
    if (t.is_char(U'`', Catcode::Other)) {
        auto c = next_raw();
        if (!c) throw Error(ErrorCode::MissingArgument, "missing character after `", t.pos());
        if (c->is_char()) {
            v = c->ch();
        } else if (utf8::length(c->name()) == 1) {
            v = utf8::decode(c->name())[0];
        } else {
            throw Error(ErrorCode::MissingArgument, "improper alphabetic constant", c->pos());
        }
        skip_optional_space();
    } else if (t.is_char(U'\'', Catcode::Other) || t.is_char(U'"', Catcode::Other)) {
        const int radix = t.ch() == U'\'' ? 8 : 16;
        auto first = next_expanded();
        if (!first) throw Error(ErrorCode::MissingArgument, "missing number", t.pos());
        v = scan_digits(*first, radix);
    } else if (digit_value(t, 10) >= 0) {
        v = scan_digits(t, 10);
    } else if (auto internal = internal_int(t)) {
        v = *internal;
    } else {
        throw Error(ErrorCode::MissingArgument, "missing number, found " + cs_text(t), t.pos());
    }
    return static_cast<std::int32_t>(negative ? -v : v);
}

int Engine::Impl::scan_register_index() {
    const std::int32_t v = scan_int();
    if (v < 0 || v > 255) {
        throw Error(ErrorCode::InvalidArgument, "bad register code (" + std::to_string(v) + ")", last_pos);
    }
    return v;
}

char32_t Engine::Impl::scan_char_code() {
    const std::int32_t v = scan_int();
    if (v < 0 || v > 0x10FFFF) {
        throw Error(ErrorCode::InvalidArgument, "bad character code (" + std::to_string(v) + ")", last_pos);
    }
    return static_cast<char32_t>(v);
}

// TeX's scan_keyword: case-insensitive, leading blanks skipped, the matched
// prefix pushed back on failure.
bool Engine::Impl::scan_keyword(std::string_view word) {
    TokenList matched;
    std::size_t k = 0;
    while (k < word.size()) {
        auto t = next_expanded();
        if (!t) break;
        if ((t->is_char(Catcode::Letter) || t->is_char(Catcode::Other)) && t->ch() < 128 &&
            std::tolower(static_cast<int>(t->ch())) == word[k]) {
            matched.push_back(std::move(*t));
            ++k;
            continue;
        }
        if (t->is_space() && matched.empty()) continue;
        back_input(std::move(*t));
        break;
    }
    if (k == word.size()) return true;
    back_input(matched);
    return false;
}

void Engine::Impl::scan_optional_equals() {
    auto t = next_nonblank_expanded();
    if (t && !t->is_char(U'=', Catcode::Other)) back_input(std::move(*t));
}

void Engine::Impl::skip_optional_space() {
    auto t = next_expanded();
    if (t && !t->is_space()) back_input(std::move(*t));
}

// TeX's scan_dimen for lengths without glue or mu units.
Dimension Engine::Impl::scan_dimension() {
    bool negative = false;
    Token t = need_nonblank("missing number");
    while (t.is_char(U'-', Catcode::Other) || t.is_char(U'+', Catcode::Other)) {
        if (t.ch() == U'-') negative = !negative;
        t = need_nonblank("missing number");
    }
    const SourcePos pos = t.pos().known() ? t.pos() : last_pos;
    auto attach_sign = [&](std::int64_t v) {
        if (v > kMaxDimen) throw Error(ErrorCode::NumberTooLarge, "dimension too large", pos);
        return Dimension::from_sp(static_cast<std::int32_t>(negative ? -v : v));
    };

    if (is_primitive(t, &Impl::p_dimen)) {
        std::int64_t v = state.dimen(scan_register_index()).sp();
        if (v < 0) {
            negative = !negative;
            v = -v;
        }
        return attach_sign(v);
    }

    std::int64_t ipart = 0;
    std::string digits;
    auto read_fraction = [&] {
        for (;;) {
            auto d = next_expanded();
            if (!d) return;
            const int v = digit_value(*d, 10);
            if (v < 0) {
                if (!d->is_space()) back_input(std::move(*d));
                return;
            }
            if (digits.size() < 17) digits += static_cast<char>('0' + v);
        }
    };
    if (t.is_char(U'.', Catcode::Other) || t.is_char(U',', Catcode::Other)) {
        read_fraction();
    } else if (digit_value(t, 10) >= 0) {
        ipart = digit_value(t, 10);
        for (;;) {
            auto d = next_expanded();
            if (!d) break;
            const int v = digit_value(*d, 10);
            if (v >= 0) {
                ipart = ipart * 10 + v;
                if (ipart > kInfinity) throw Error(ErrorCode::NumberTooLarge, "number too big", pos);
                continue;
            }
            if (d->is_char(U'.', Catcode::Other) || d->is_char(U',', Catcode::Other)) {
                read_fraction();
            } else if (!d->is_space()) {
                back_input(std::move(*d));
            }
            break;
        }
    } else if (t.is_char(U'`', Catcode::Other) || t.is_char(U'\'', Catcode::Other) ||
               t.is_char(U'"', Catcode::Other)) {
        back_input(t);
        ipart = scan_int();
    } else if (auto internal = internal_int(t)) {
        ipart = *internal;
    } else {
        throw Error(ErrorCode::MissingArgument, "missing number, found " + cs_text(t), pos);
    }
    if (ipart < 0) {
        negative = !negative;
        ipart = -ipart;
    }
    std::int64_t f = digits.empty() ? 0 : round_decimals(digits);

    // units that are internal dimensions: a register, em or ex
    if (auto u = next_nonblank_expanded()) {
        if (is_primitive(*u, &Impl::p_dimen)) {
            std::int64_t v = state.dimen(scan_register_index()).sp();
            if (v < 0) {
                negative = !negative;
                v = -v;
            }
            return attach_sign(nx_plus_y(ipart, v, xn_over_d(v, f, kUnity), pos));
        }
        back_input(std::move(*u));
    }
    std::optional<std::int64_t> unit;
    if (scan_keyword("em")) {
        unit = opts.font.em_dimension().sp();
    } else if (scan_keyword("ex")) {
        unit = opts.font.ex_dimension().sp();
    }
    if (unit) {
        const std::int64_t r = nx_plus_y(ipart, *unit, xn_over_d(*unit, f, kUnity), pos);
        skip_optional_space();
        return attach_sign(r);
    }
    scan_keyword("true");  // no magnification, so true units are plain units
    if (scan_keyword("pt")) {
        // already in points
    } else if (scan_keyword("sp")) {
        skip_optional_space();
        return attach_sign(ipart);
    } else {
        bool found = false;
        for (const Unit& un : kUnits) {
            if (!scan_keyword(un.name)) continue;
            std::int64_t rem = 0;
            ipart = xn_over_d(ipart, un.num, un.den, &rem);
            f = (un.num * f + kUnity * rem) / un.den;
            ipart += f / kUnity;
            f %= kUnity;
            found = true;
            break;
        }
        if (!found) throw Error(ErrorCode::MissingUnit, "illegal unit of measure", last_pos);
    }
    if (ipart >= 16384) throw Error(ErrorCode::NumberTooLarge, "dimension too large", pos);
    skip_optional_space();
    return attach_sign(ipart * kUnity + f);
}

TokenList Engine::Impl::string_tokens(std::string_view s) {
    TokenList out;
    for (char32_t c : utf8::decode(s)) {
        out.push_back(c == U' ' ? Token::space() : Token::character(c, Catcode::Other));
    }
    return out;
}

TokenList Engine::Impl::the_tokens(const Token& head) {
    auto t = next_nonblank_expanded();
    if (!t) throw Error(ErrorCode::MissingArgument, "missing quantity after \\the", head.pos());
    const PrimitiveInfo* info = primitive_info(meaning(*t));
    if (info && info->handler == &Impl::p_dimen) {
        return string_tokens(print_scaled(state.dimen(scan_register_index()).sp()) + "pt");
    }
    if (auto v = internal_int(*t)) return string_tokens(std::to_string(*v));
    throw Error(ErrorCode::MissingArgument, "you can't use " + cs_text(*t) + " after \\the", t->pos());
}

void Engine::Impl::p_the(const Token& head) { push_level(the_tokens(head)); }

void Engine::Impl::p_number(const Token&) { push_level(string_tokens(std::to_string(scan_int()))); }

void Engine::Impl::p_csname(const Token& head) {
    std::string name;
    for (;;) {
        auto t = next_expanded();
        if (!t) throw Error(ErrorCode::MissingArgument, "missing \\endcsname", head.pos());
        if (is_primitive(*t, &Impl::p_endcsname)) break;
        if (!t->is_char()) throw Error(ErrorCode::MissingArgument, "missing \\endcsname before " + cs_text(*t), t->pos());
        utf8::append(name, t->ch());
    }
    if (!state.lookup(name)) state.set_binding(name, relax_binding);
    back_input(Token::control(std::move(name), head.pos()));
}

void Engine::Impl::p_endcsname(const Token& head) { warn("extra \\endcsname", head.pos()); }

void Engine::Impl::p_expandafter(const Token&) {
    auto t1 = next_raw();
    if (!t1) return;
    auto t2 = next_raw();
    if (t2) {
        const Binding* b = t2->noexpand() ? nullptr : meaning(*t2);
        if (b && is_expandable(b)) {
            expand(*t2, *b);
        } else {
            back_input(std::move(*t2));
        }
    }
    back_input(std::move(*t1));
}

void Engine::Impl::p_noexpand(const Token&) {
    auto t = next_raw();
    if (!t) return;
    if (is_expandable(meaning(*t))) t->set_noexpand(true);
    back_input(std::move(*t));
}

// ---------------------------------------------------------------------------
// assignments

void Engine::Impl::define(const Token& head, bool expand_body, bool global) {
    auto cs = next_raw();
    while (cs && cs->is_space()) cs = next_raw();
    if (!cs || !cs->is_definable()) {
        throw Error(ErrorCode::MissingArgument, "missing control sequence after " + cs_text(head), head.pos());
    }
    TokenList params;
    for (;;) {
        auto t = next_raw();
        if (!t) {
            throw Error(ErrorCode::RunawayArgument, "file ended while scanning the definition of " + cs_text(*cs),
                        cs->pos());
        }
        if (t->is_char(Catcode::BeginGroup)) break;
        if (t->is_char(Catcode::EndGroup)) {
            throw Error(ErrorCode::MissingArgument, "missing { in the definition of " + cs_text(*cs), t->pos());
        }
        params.push_back(std::move(*t));
    }
    ArgSpec spec = ArgSpec::parse(params);
    const TokenList raw = read_balanced(*cs);
    TokenList body;
    body.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const Token& t = raw[i];
        if (!t.is_char(Catcode::Parameter)) {
            body.push_back(t);
            continue;
        }
        if (i + 1 >= raw.size()) {
            throw Error(ErrorCode::BadParameterIndex, "parameter character at end of definition", t.pos());
        }
        const Token& n = raw[++i];
        if (n.is_char(Catcode::Parameter)) {
            body.push_back(n);
        } else if (n.is_char() && n.ch() >= U'1' && n.ch() <= U'9') {
            body.push_back(Token::param(static_cast<int>(n.ch() - U'0')));
        } else {
            throw Error(ErrorCode::BadParameterIndex, "illegal parameter number in definition of " + cs_text(*cs),
                        n.pos());
        }
    }
    if (expand_body) {
        Isolated iso(*this, std::move(body));
        body = expand_rest();
    }
    check_macro(spec, body);
    state.set_binding(cs->binding_key(),
                      std::make_shared<const Binding>(MacroBinding{std::move(spec), std::move(body), true}), global);
}

void Engine::Impl::p_def(const Token& head) { define(head, false, take_global()); }
void Engine::Impl::p_edef(const Token& head) { define(head, true, take_global()); }
void Engine::Impl::p_gdef(const Token& head) {
    take_global();
    define(head, false, true);
}
void Engine::Impl::p_xdef(const Token& head) {
    take_global();
    define(head, true, true);
}

void Engine::Impl::p_let(const Token& head) {
    const bool global = take_global();
    auto cs = next_raw();
    while (cs && cs->is_space()) cs = next_raw();
    if (!cs || !cs->is_definable()) {
        throw Error(ErrorCode::MissingArgument, "missing control sequence after \\let", head.pos());
    }
    auto t = next_raw();
    while (t && t->is_space()) t = next_raw();
    if (t && t->is_char(U'=', Catcode::Other)) {
        t = next_raw();
        if (t && t->is_space()) t = next_raw();
    }
    if (!t) throw Error(ErrorCode::RunawayArgument, "file ended in \\let", head.pos());
    BindingPtr b;
    if (t->is_definable()) {
        b = state.lookup(t->binding_key());
    } else {
        Token c = *t;
        c.set_pos({});
        b = std::make_shared<const Binding>(CharBinding{std::move(c)});
    }
    state.set_binding(cs->binding_key(), std::move(b), global);
}

void Engine::Impl::p_global(const Token& head) {
    global_pending = true;
    for (;;) {
        Token t = need_nonblank("missing assignment after \\global");
        const PrimitiveInfo* info = primitive_info(meaning(t));
        if (info && info->handler == &Impl::p_relax) continue;
        if (!info || !info->assignment) {
            global_pending = false;
            throw Error(ErrorCode::InvalidArgument, "you can't use a prefix with " + cs_text(t),
                        t.pos().known() ? t.pos() : head.pos());
        }
        const auto frame = profiler.enter(profile_name(t));
        (this->*info->handler)(t);
        profiler.leave(frame);
        return;
    }
}

void Engine::Impl::p_count(const Token&) {
    const bool global = take_global();
    const int index = scan_register_index();
    scan_optional_equals();
    state.set_count(index, scan_int(), global);
}

void Engine::Impl::p_dimen(const Token&) {
    const bool global = take_global();
    const int index = scan_register_index();
    scan_optional_equals();
    state.set_dimen(index, scan_dimension(), global);
}

// op: 0 advance, 1 multiply, 2 divide
void Engine::Impl::arith(const Token& head, int op) {
    const bool global = take_global();
    Token t = need_nonblank("missing register after " + cs_text(head));
    const bool is_count = is_primitive(t, &Impl::p_count);
    if (!is_count && !is_primitive(t, &Impl::p_dimen)) {
        throw Error(ErrorCode::InvalidArgument, "you can't use " + cs_text(t) + " after " + cs_text(head), t.pos());
    }
    const int index = scan_register_index();
    scan_keyword("by");
    const std::int64_t limit = is_count ? kInfinity : kMaxDimen;
    const std::int64_t a = is_count ? state.count(index) : state.dimen(index).sp();
    std::int64_t r;
    if (op == 0) {
        r = a + (is_count ? scan_int() : scan_dimension().sp());
    } else if (op == 1) {
        r = a * scan_int();
    } else {
        const std::int64_t d = scan_int();
        if (d == 0) throw Error(ErrorCode::ArithmeticOverflow, "division by zero", head.pos());
        r = a / d;  // truncates toward zero like TeX
    }
    if (r > limit || r < -limit) throw Error(ErrorCode::ArithmeticOverflow, "arithmetic overflow", head.pos());
    if (is_count) {
        state.set_count(index, static_cast<std::int32_t>(r), global);
    } else {
        state.set_dimen(index, Dimension::from_sp(static_cast<std::int32_t>(r)), global);
    }
}

void Engine::Impl::p_advance(const Token& head) { arith(head, 0); }
void Engine::Impl::p_multiply(const Token& head) { arith(head, 1); }
void Engine::Impl::p_divide(const Token& head) { arith(head, 2); }

void Engine::Impl::p_catcode(const Token& head) {
    const bool global = take_global();
    const char32_t c = scan_char_code();
    scan_optional_equals();
    const std::int32_t v = scan_int();
    if (v < 0 || v >= kCatcodeCount) {
        throw Error(ErrorCode::InvalidArgument, "invalid code (" + std::to_string(v) + "), should be 0 to 15",
                    head.pos());
    }
    state.set_catcode(c, static_cast<Catcode>(v), global);
}

void Engine::Impl::p_message(const Token& head) {
    Token t = need_nonblank("missing { after \\message");
    if (!t.is_char(Catcode::BeginGroup)) {
        throw Error(ErrorCode::MissingArgument, "missing { inserted after \\message", t.pos());
    }
    TokenList body = read_balanced(head);
    TokenList out;
    {
        Isolated iso(*this, std::move(body));
        out = expand_rest();
    }
    std::string text = detokenize(out);
    diags.push_back({Severity::Info, text, head.pos()});
    messages.push_back(std::move(text));
}

void Engine::Impl::p_begingroup(const Token& head) { state.begin_group(GroupKind::SemiSimple, {}, head.pos()); }
void Engine::Impl::p_endgroup(const Token&) { state.end_group(GroupKind::SemiSimple); }

// ---------------------------------------------------------------------------
// primitive table

const std::unordered_map<std::string, Engine::Impl::PrimitiveInfo>& Engine::Impl::primitives() {
    using I = Impl;
    static const std::unordered_map<std::string, PrimitiveInfo> table = {
        // expandable
        {"the", {&I::p_the, true}},
        {"number", {&I::p_number, true}},
        {"ifnum", {&I::p_ifnum, true, true}},
        {"ifdim", {&I::p_ifdim, true, true}},
        {"ifx", {&I::p_ifx, true, true}},
        {"if", {&I::p_if, true, true}},
        {"iftrue", {&I::p_iftrue, true, true}},
        {"iffalse", {&I::p_iffalse, true, true}},
        {"else", {&I::p_else, true}},
        {"fi", {&I::p_fi, true}},
        {"csname", {&I::p_csname, true}},
        {"expandafter", {&I::p_expandafter, true}},
        {"noexpand", {&I::p_noexpand, true}},
        // assignments
        {"def", {&I::p_def, false, false, true}},
        {"gdef", {&I::p_gdef, false, false, true}},
        {"edef", {&I::p_edef, false, false, true}},
        {"xdef", {&I::p_xdef, false, false, true}},
        {"let", {&I::p_let, false, false, true}},
        {"global", {&I::p_global, false, false, true}},
        {"count", {&I::p_count, false, false, true}},
        {"dimen", {&I::p_dimen, false, false, true}},
        {"advance", {&I::p_advance, false, false, true}},
        {"multiply", {&I::p_multiply, false, false, true}},
        {"divide", {&I::p_divide, false, false, true}},
        {"catcode", {&I::p_catcode, false, false, true}},
        {"constructor", {&I::p_constructor, false, false, true}},
        // everything else
        {"relax", {&I::p_relax}},
        {"endcsname", {&I::p_endcsname}},
        {"par", {&I::p_par}},
        {"begingroup", {&I::p_begingroup}},
        {"endgroup", {&I::p_endgroup}},
        {"message", {&I::p_message}},
        {"begin", {&I::p_begin}},
        {"end", {&I::p_end}},
        {std::string(kEndEnvironment), {&I::p_endenv}},
        {"label", {&I::p_label}},
        {"escapedchar", {&I::p_escapedchar}},
        {"mathsym", {&I::p_mathsym}},
        {"(", {&I::p_math_inline}},
        {"[", {&I::p_math_display}},
        {")", {&I::p_math_close}},
        {"]", {&I::p_math_close}},
        {"gpicture", {&I::p_gpicture}},
        {"endgpicture", {&I::p_endgpicture}},
        {"gdv@moveto", {&I::p_moveto}},
        {"gdv@lineto", {&I::p_lineto}},
        {"gdv@curveto", {&I::p_curveto}},
        {"gdv@closepath", {&I::p_closepath}},
        {"gdv@stroke", {&I::p_stroke}},
        {"gdv@fill", {&I::p_fill}},
        {"gdv@linewidth", {&I::p_linewidth}},
        {"gdv@color", {&I::p_color}},
        {"gdv@transform", {&I::p_transform}},
        {"gdv@text", {&I::p_gtext}},
    };
    return table;
}

}  // namespace semtex
