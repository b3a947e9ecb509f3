// Digestion: characters, constructors, math, pictures and the public Engine
// surface.
#include <algorithm>
#include <cstdlib>

#include "engine_impl.hpp"
#include "semtex/math.hpp"
#include "semtex/tokenizer.hpp"
#include "semtex/utf8.hpp"

namespace semtex {

namespace {

constexpr std::string_view kFragment = "#fragment";

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\n");
    return s.substr(first, last - first + 1);
}

void push_merged(std::vector<DocNode>& out, DocNode node) {
    if (node.is_text()) {
        if (node.text().empty()) return;
        if (!out.empty() && out.back().is_text()) {
            out.back().text() += node.text();
            return;
        }
    }
    out.push_back(std::move(node));
}

bool is_block(const DocNode& node) {
    if (!node.is_element()) return false;
    const schema::ElementSpec* spec = schema::find(node.element().name);
    return spec && (spec->level == schema::Level::Block || spec->level == schema::Level::Title);
}

int section_level(const Element& e) {
    const std::string* v = e.attr("level");
    return v && !v->empty() ? std::atoi(v->c_str()) : 1;
}

bool is_spacing(std::string_view name) {
    return name == "," || name == ";" || name == ":" || name == " " || name == "quad" || name == "qquad";
}

}  // namespace

void Engine::Impl::warn(std::string msg, SourcePos pos) {
    diags.push_back({Severity::Warning, std::move(msg), pos.known() ? pos : last_pos});
}

std::string Engine::Impl::arg_string(const Token& head) { return trim(detokenize(read_undelimited(head))); }

// ---------------------------------------------------------------------------
// the main loop

void Engine::Impl::main_loop() {
    while (auto t = next_expanded()) dispatch(*t);
}

void Engine::Impl::dispatch(const Token& t) {
    if (t.is_char() && !t.is_char(Catcode::Active)) {
        handle_char(t);
        return;
    }
    if (t.is_param()) return;
    // hold a reference: running the binding may redefine its own name
    const BindingPtr hold = state.lookup(t.binding_key());
    if (!hold) {
        undefined(t);
        return;
    }
    if (t.noexpand()) return;  // a \noexpand'ed macro acts as \relax
    std::visit(Overloaded{
                   [&](const MacroBinding& m) { expand_macro(t, m); },
                   [&](const PrimitiveBinding& p) { run_primitive(t, p); },
                   [&](const ConstructorBinding& c) { run_constructor(t, c); },
                   [&](const CharBinding& c) {
                       Token x = c.token;
                       x.set_pos(t.pos());
                       handle_char(x);
                   },
               },
               *hold);
}

void Engine::Impl::run_primitive(const Token& head, const PrimitiveBinding& p) {
    auto it = primitives().find(p.id);
    if (it == primitives().end()) throw Error(ErrorCode::InvalidArgument, "unknown primitive '" + p.id + "'", head.pos());
    const auto frame = profiler.enter(profile_name(head));
    (this->*it->second.handler)(head);
    profiler.leave(frame);
}

bool Engine::Impl::outside_picture_text() const { return picture && open.size() == picture_base; }

void Engine::Impl::handle_char(const Token& t) {
    switch (t.cat()) {
    case Catcode::BeginGroup: state.begin_group(GroupKind::Simple, {}, t.pos()); return;
    case Catcode::EndGroup: state.end_group(GroupKind::Simple); return;
    case Catcode::MathShift: {
        bool display = false;
        auto n = next_raw();
        if (n && n->is_char(Catcode::MathShift)) {
            display = true;
        } else if (n) {
            back_input(std::move(*n));
        }
        math(t, display, [](const Token& x) { return x.is_char(Catcode::MathShift); });
        return;
    }
    case Catcode::Space:
        if (state.mode == Mode::Horizontal && !outside_picture_text()) append_text(" ");
        return;
    default: break;
    }
    if (outside_picture_text()) {
        if (!picture_text_warned) warn("text inside a picture outside \\gtext is ignored", t.pos());
        picture_text_warned = true;
        return;
    }
    ensure_horizontal();
    append_text(utf8::encode(t.ch()));
}

void Engine::Impl::undefined(const Token& t) {
    const std::string name = profile_name(t);
    if (opts.strict) throw Error(ErrorCode::UndefinedControlSequence, "undefined control sequence " + name, t.pos());
    warn("undefined control sequence " + name, t.pos());
    if (outside_picture_text()) return;
    ensure_horizontal();
    append(Element("error", {{"class", "undefined"}}, {DocNode::text(name)}));
}

// ---------------------------------------------------------------------------
// document builder

bool Engine::Impl::in_fragment() const { return open.back().name == kFragment; }

void Engine::Impl::ensure_horizontal() {
    if (state.mode != Mode::Vertical) return;
    open.emplace_back("para");
    open.emplace_back("p");
    state.mode = Mode::Horizontal;
}

void Engine::Impl::end_paragraph() {
    if (state.mode != Mode::Horizontal || top().name != "p") return;
    Element p = std::move(open.back());
    open.pop_back();
    while (!p.children.empty() && p.children.back().is_text()) {
        std::string& text = p.children.back().text();
        text.erase(text.find_last_not_of(' ') + 1);
        if (!text.empty()) break;
        p.children.pop_back();
    }
    Element para = std::move(open.back());
    open.pop_back();
    if (!p.children.empty()) {
        para.children.emplace_back(std::move(p));
        top().children.emplace_back(std::move(para));
    }
    state.mode = Mode::Vertical;
}

void Engine::Impl::append(DocNode node) { push_merged(top().children, std::move(node)); }

void Engine::Impl::append_text(std::string_view text) { append(DocNode::text(std::string(text))); }

void Engine::Impl::close_top() {
    Element e = std::move(open.back());
    open.pop_back();
    top().children.emplace_back(std::move(e));
}

void Engine::Impl::open_section(Element section) {
    const int level = section_level(section);
    while (top().name == "section" && section_level(top()) >= level) close_top();
    if (!section.attr("xml:id")) {
        const Element& parent = top();
        int n = 1;
        for (const auto& c : parent.children) n += c.is_element("section") ? 1 : 0;
        std::string id = "S" + std::to_string(n);
        if (parent.name == "section" && parent.attr("xml:id")) id = *parent.attr("xml:id") + "." + id;
        section.set_attr("xml:id", std::move(id));
    }
    open.push_back(std::move(section));
}

void Engine::Impl::place(DocNode node) {
    if (is_block(node)) {
        end_paragraph();
        const schema::ElementSpec* spec = schema::find(node.element().name);
        if (spec->auto_close && !in_fragment()) {
            open_section(std::move(node.element()));
        } else {
            top().children.push_back(std::move(node));
        }
        return;
    }
    if (node.is_text() && state.mode == Mode::Vertical && trim(node.text()).empty()) return;
    ensure_horizontal();
    append(std::move(node));
}

// ---------------------------------------------------------------------------
// constructors

std::vector<DocNode> Engine::Impl::digest_fragment(TokenList tokens) {
    const Mode saved = state.mode;
    state.mode = Mode::Horizontal;
    open.emplace_back(std::string(kFragment));
    const std::size_t base = open.size();
    const std::size_t depth = state.depth();
    state.begin_group(GroupKind::Simple, {}, last_pos);
    {
        Isolated iso(*this, std::move(tokens));
        main_loop();
    }
    if (state.depth() != depth + 1) {
        throw Error(ErrorCode::UnbalancedGroup, "a group opened inside an argument is not closed",
                    state.innermost_pos());
    }
    state.end_group(GroupKind::Simple);
    while (open.size() > base) close_top();
    Element frag = std::move(open.back());
    open.pop_back();
    state.mode = saved;
    return std::move(frag.children);
}

void Engine::Impl::run_constructor(const Token& head, const ConstructorBinding& c) {
    const auto frame = profiler.enter(profile_name(head));
    const std::vector<TokenList> args = read_arguments(head, c.spec);
    std::vector<std::optional<std::vector<DocNode>>> digested(args.size());
    auto verbatim = [&](int arg) { return trim(detokenize(args.at(static_cast<std::size_t>(arg - 1)))); };

    const auto first = c.tmpl.first_element();
    const schema::ElementSpec* spec = first ? schema::find(*first) : nullptr;
    if (spec && (spec->level == schema::Level::Block || spec->level == schema::Level::Title)) end_paragraph();

    std::vector<Element> stack;
    std::vector<DocNode> out;
    auto emit = [&](DocNode n) { push_merged(stack.empty() ? out : stack.back().children, std::move(n)); };
    for (const TemplateItem& item : c.tmpl.items()) {
        switch (item.kind) {
        case TemplateItem::Kind::ElementOpen: {
            Element e(item.name);
            for (const AttrTemplate& a : item.attrs) {
                std::string value;
                for (const auto& part : a.parts) value += part.arg > 0 ? verbatim(part.arg) : part.literal;
                e.set_attr(a.name, std::move(value));
            }
            stack.push_back(std::move(e));
            break;
        }
        case TemplateItem::Kind::ElementClose: {
            Element e = std::move(stack.back());
            stack.pop_back();
            emit(std::move(e));
            break;
        }
        case TemplateItem::Kind::ArgInsert:
            if (item.mode == InsertMode::VerbatimText) {
                emit(DocNode::text(verbatim(item.arg)));
            } else {
                auto& slot = digested.at(static_cast<std::size_t>(item.arg - 1));
                if (!slot) slot = digest_fragment(args[static_cast<std::size_t>(item.arg - 1)]);
                for (const DocNode& n : *slot) emit(n);
            }
            break;
        case TemplateItem::Kind::LiteralText: emit(DocNode::text(item.text)); break;
        }
    }
    for (DocNode& n : out) place(std::move(n));
    profiler.leave(frame);
}

// ---------------------------------------------------------------------------
// text-level primitives

void Engine::Impl::p_par(const Token&) {
    if (!in_fragment()) end_paragraph();
}

void Engine::Impl::p_begin(const Token& head) {
    std::string name = arg_string(head);
    state.begin_group(GroupKind::Environment, name, head.pos());
    back_input(Token::control(std::move(name), head.pos()));
}

void Engine::Impl::p_end(const Token& head) {
    const std::string name = arg_string(head);
    if (state.innermost_kind() != GroupKind::Environment) {
        throw Error(ErrorCode::UnbalancedGroup, "\\end{" + name + "} without a matching \\begin", head.pos());
    }
    if (state.innermost_env() != name) {
        throw Error(ErrorCode::UnbalancedGroup, "\\begin{" + state.innermost_env() + "} ended by \\end{" + name + "}",
                    head.pos());
    }
    back_input(Token::control(std::string(kEndEnvironment), head.pos()));
    if (state.lookup("end" + name)) back_input(Token::control("end" + name, head.pos()));
}

void Engine::Impl::p_endenv(const Token& head) {
    if (state.innermost_kind() != GroupKind::Environment) {
        throw Error(ErrorCode::UnbalancedGroup, "environment end inside an unclosed group", head.pos());
    }
    state.end_group(GroupKind::Environment, state.innermost_env());
}

void Engine::Impl::p_label(const Token& head) {
    const std::string key = arg_string(head);
    if (labels.contains(key)) warn("label '" + key + "' multiply defined", head.pos());
    if (state.mode == Mode::Vertical && !in_fragment() && top().name == "section") {
        Element& s = top();
        const std::string* existing = s.attr("labels");
        s.set_attr("labels", existing ? *existing + " " + key : key);
        labels[key] = *s.attr("xml:id");
        return;
    }
    std::string id = "A" + std::to_string(++anchor_count);
    labels[key] = id;
    place(Element("anchor", {{"xml:id", std::move(id)}, {"labels", key}}));
}

// \constructor{\name}{parameter text}{template}
void Engine::Impl::p_constructor(const Token& head) {
    const bool global = take_global();
    TokenList name = read_undelimited(head);
    std::erase_if(name, [](const Token& t) { return t.is_space(); });
    if (name.size() != 1 || !name.front().is_definable()) {
        throw Error(ErrorCode::MissingArgument, "\\constructor expects one control sequence", head.pos());
    }
    ArgSpec spec = ArgSpec::parse(read_undelimited(head));
    const std::string surface = detokenize(read_undelimited(head));
    ConstructorTemplate tmpl = ConstructorTemplate::parse(surface, spec.arity());
    state.set_binding(name.front().binding_key(),
                      std::make_shared<const Binding>(ConstructorBinding{std::move(spec), std::move(tmpl)}), global);
}

void Engine::Impl::p_escapedchar(const Token& head) {
    if (outside_picture_text()) return;
    if (head.name() == " " && state.mode == Mode::Vertical) return;
    ensure_horizontal();
    append_text(head.name());
}

void Engine::Impl::p_mathsym(const Token& head) {
    if (outside_picture_text()) return;
    const std::string& name = head.name();
    if (std::string g = math::greek_letter(name); !g.empty()) {
        ensure_horizontal();
        append_text(g);
        return;
    }
    if (is_spacing(name)) {
        if (state.mode == Mode::Horizontal) append_text(" ");
        return;
    }
    if (name == "!") return;
    if (opts.strict) throw Error(ErrorCode::UnknownMathCommand, "\\" + name + " is only allowed in math", head.pos());
    warn("\\" + name + " is only allowed in math", head.pos());
    ensure_horizontal();
    append(Element("error", {{"class", "math"}}, {DocNode::text("\\" + name)}));
}

// ---------------------------------------------------------------------------
// math

void Engine::Impl::math(const Token& head, bool display, const std::function<bool(const Token&)>& is_end) {
    const Mode saved = state.mode;
    state.mode = Mode::Math;
    TokenList body;
    int depth = 0;
    for (;;) {
        auto x = next_expanded();
        if (!x) throw Error(ErrorCode::RunawayArgument, "file ended inside math", head.pos());
        x->set_noexpand(false);
        if (depth == 0 && is_end(*x)) {
            if (display && x->is_char(Catcode::MathShift)) {
                auto y = next_raw();
                if (!y || !y->is_char(Catcode::MathShift)) {
                    warn("display math should end with $$", x->pos());
                    if (y) back_input(std::move(*y));
                }
            }
            break;
        }
        if (x->is_char(Catcode::BeginGroup)) ++depth;
        if (x->is_char(Catcode::EndGroup)) {
            if (depth == 0) throw Error(ErrorCode::UnbalancedGroup, "extra } in math", x->pos());
            --depth;
        }
        body.push_back(std::move(*x));
    }
    state.mode = saved;
    emit_math(std::move(body), display, head.pos());
}

void Engine::Impl::emit_math(TokenList body, bool display, SourcePos pos) {
    MathNode node;
    node.tex = trim(detokenize(body));
    node.display = display ? MathDisplay::Block : MathDisplay::Inline;
    std::vector<std::string> warnings;
    try {
        node.content = math::parse_math(body, {opts.strict}, &warnings);
    } catch (const Error& e) {
        if (opts.strict) throw Error(e.code(), e.detail(), pos);
        warn(e.detail(), pos);
        ensure_horizontal();
        append(Element("error", {{"class", "math"}}, {DocNode::text(node.tex)}));
        return;
    }
    for (auto& w : warnings) warn(std::move(w), pos);
    if (outside_picture_text()) return;
    ensure_horizontal();
    append(std::move(node));
}

void Engine::Impl::p_math_inline(const Token& head) {
    math(head, false, [](const Token& x) { return x.is_control(")"); });
}

void Engine::Impl::p_math_display(const Token& head) {
    math(head, true, [](const Token& x) { return x.is_control("]"); });
}

void Engine::Impl::p_math_close(const Token& head) { warn(profile_name(head) + " outside math", head.pos()); }

// ---------------------------------------------------------------------------
// pictures

void Engine::Impl::p_gpicture(const Token& head) {
    if (picture) throw Error(ErrorCode::UnbalancedGroup, "pictures cannot be nested", head.pos());
    end_paragraph();
    picture.emplace();
    picture_base = open.size();
    picture_text_warned = false;
}

void Engine::Impl::p_endgpicture(const Token& head) {
    if (!picture) throw Error(ErrorCode::UnbalancedGroup, "\\endgpicture without \\gpicture", head.pos());
    std::vector<std::string> warnings;
    GraphicsNode g = picture->finish(&warnings);
    picture.reset();
    for (auto& w : warnings) warn(std::move(w), head.pos());
    place(Element("picture", {}, {std::move(g)}));
}

bool Engine::Impl::graphics_ok(const Token& head) {
    if (picture) return true;
    if (opts.strict) throw Error(ErrorCode::InvalidArgument, profile_name(head) + " outside a picture", head.pos());
    warn(profile_name(head) + " outside a picture ignored", head.pos());
    return false;
}

void Engine::Impl::graphics_guard(const Token& head, const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        const bool recoverable = e.code() == ErrorCode::NoCurrentPoint || e.code() == ErrorCode::EmptyPath ||
                                 e.code() == ErrorCode::InvalidTransform;
        if (opts.strict || !recoverable) throw Error(e.code(), e.detail(), head.pos());
        warn(e.detail(), head.pos());
    }
}

Dimension Engine::Impl::dimen_argument(const Token& head) {
    Isolated iso(*this, read_undelimited(head));
    const Dimension d = scan_dimension();
    for (const Token& t : iso.rest()) {
        if (!t.is_space()) {
            throw Error(ErrorCode::InvalidArgument, "unexpected " + detokenize({t}) + " after a dimension in " +
                                                        profile_name(head), head.pos());
        }
    }
    return d;
}

std::int32_t Engine::Impl::int_argument(const Token& head) {
    Isolated iso(*this, read_undelimited(head));
    const std::int32_t v = scan_int();
    for (const Token& t : iso.rest()) {
        if (!t.is_space()) {
            throw Error(ErrorCode::InvalidArgument, "unexpected " + detokenize({t}) + " after a number in " +
                                                        profile_name(head), head.pos());
        }
    }
    return v;
}

double Engine::Impl::real_argument(const Token& head) {
    std::string text;
    {
        Isolated iso(*this, read_undelimited(head));
        text = trim(detokenize(expand_rest()));
    }
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, "expected a number in " + profile_name(head) + ", got '" + text + "'",
                    head.pos());
    }
    return v;
}

void Engine::Impl::p_moveto(const Token& head) {
    const double x = dimen_argument(head).pt();
    const double y = dimen_argument(head).pt();
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->path_extend(gfx::PathOp::move_to({x, y})); });
}

void Engine::Impl::p_lineto(const Token& head) {
    const double x = dimen_argument(head).pt();
    const double y = dimen_argument(head).pt();
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->path_extend(gfx::PathOp::line_to({x, y})); });
}

void Engine::Impl::p_curveto(const Token& head) {
    double v[6];
    for (double& d : v) d = dimen_argument(head).pt();
    if (graphics_ok(head)) {
        graphics_guard(head,
                       [&] { picture->path_extend(gfx::PathOp::curve_to({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]})); });
    }
}

void Engine::Impl::p_closepath(const Token& head) {
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->path_extend(gfx::PathOp::close()); });
}

void Engine::Impl::p_stroke(const Token& head) {
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->stroke(); });
}

void Engine::Impl::p_fill(const Token& head) {
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->fill(); });
}

void Engine::Impl::p_linewidth(const Token& head) {
    const Dimension w = dimen_argument(head);
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->set_line_width(w); });
}

void Engine::Impl::p_color(const Token& head) {
    std::uint8_t c[3];
    for (auto& v : c) {
        const std::int32_t x = int_argument(head);
        if (x < 0 || x > 255) {
            throw Error(ErrorCode::InvalidArgument, "color component " + std::to_string(x) + " outside 0..255",
                        head.pos());
        }
        v = static_cast<std::uint8_t>(x);
    }
    if (graphics_ok(head)) picture->set_color({c[0], c[1], c[2]});
}

void Engine::Impl::p_transform(const Token& head) {
    gfx::Affine m;
    m.a = real_argument(head);
    m.b = real_argument(head);
    m.c = real_argument(head);
    m.d = real_argument(head);
    m.e = dimen_argument(head).pt();
    m.f = dimen_argument(head).pt();
    if (graphics_ok(head)) graphics_guard(head, [&] { picture->concat(m); });
}

void Engine::Impl::p_gtext(const Token& head) {
    const double x = dimen_argument(head).pt();
    const double y = dimen_argument(head).pt();
    TokenList content = read_undelimited(head);
    if (!graphics_ok(head)) return;
    std::vector<DocNode> nodes = digest_fragment(std::move(content));
    picture->add_text({x, y}, std::move(nodes), opts.font);
}

// ---------------------------------------------------------------------------
// end of document

Document Engine::Impl::finish() {
    end_paragraph();
    if (picture) throw Error(ErrorCode::UnbalancedGroup, "picture not closed at end of input", last_pos);
    if (state.depth() > 1) {
        if (state.innermost_kind() == GroupKind::Environment) {
            throw Error(ErrorCode::UnbalancedGroup, "\\begin{" + state.innermost_env() + "} not ended",
                        state.innermost_pos());
        }
        throw Error(ErrorCode::UnbalancedGroup, "group not closed at end of input", state.innermost_pos());
    }
    if (!conds.empty()) throw Error(ErrorCode::UnbalancedConditional, "conditional not closed at end of input", last_pos);
    while (open.size() > 1) close_top();
    Document doc;
    doc.root = DocNode(std::move(open.front()));
    open.clear();
    open.emplace_back("document");
    doc.labels = labels;
    doc.diagnostics = diags;
    if (toplevel_frame != 0) {
        profiler.leave(toplevel_frame);
        profiler.finish();
        if (opts.profile) doc.profile = profiler.report();
    }
    return doc;
}

// ---------------------------------------------------------------------------
// public surface

Engine::Engine(std::shared_ptr<const Registry> registry, ConvertOptions options)
    : impl_(std::make_unique<Impl>(std::move(registry), std::move(options))) {}

Engine::Engine(std::shared_ptr<const Registry> registry, ConvertOptions options, std::shared_ptr<Profiler> profiler)
    : impl_(std::make_unique<Impl>(std::move(registry), std::move(options), std::move(profiler))) {}

Engine::~Engine() = default;

EngineState& Engine::state() { return impl_->state; }
const EngineState& Engine::state() const { return impl_->state; }

void Engine::define_macro(const std::string& name, ArgSpec spec, TokenList body, bool global) {
    check_macro(spec, body);
    impl_->state.set_binding(name, std::make_shared<const Binding>(MacroBinding{std::move(spec), std::move(body), true}),
                             global);
}

void Engine::set_source(std::string_view source) { impl_->source = std::make_unique<Tokenizer>(source); }

void Engine::push_tokens(TokenList tokens) { impl_->push_level(std::move(tokens)); }

bool Engine::input_empty() const { return impl_->input_empty(); }

bool Engine::expand_step() { return impl_->expand_step(); }

TokenList Engine::expand_all() { return impl_->expand_rest(); }

TokenList Engine::expand_fully(TokenList tokens) {
    Impl::Isolated iso(*impl_, std::move(tokens));
    return impl_->expand_rest();
}

Dimension Engine::scan_dimension() { return impl_->scan_dimension(); }
std::int32_t Engine::scan_int() { return impl_->scan_int(); }

void Engine::run() { impl_->main_loop(); }

std::vector<DocNode> Engine::digest(TokenList tokens) { return impl_->digest_fragment(std::move(tokens)); }

Document Engine::finish() { return impl_->finish(); }

std::vector<ProfileRecord> Engine::profile_report() const { return impl_->profiler.report(); }
const std::vector<std::string>& Engine::messages() const { return impl_->messages; }
const std::vector<Diagnostic>& Engine::diagnostics() const { return impl_->diags; }
SourcePos Engine::last_position() const { return impl_->last_pos; }

std::vector<std::pair<std::string, std::string>> Engine::primitive_bindings() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [id, info] : Impl::primitives()) {
        if (id != "escapedchar" && id != "mathsym") out.emplace_back(id, id);
    }
    for (const char* c : {" ", "%", "$", "&", "#", "_", "{", "}"}) out.emplace_back(c, "escapedchar");
    for (const std::string& name : math::math_command_names()) {
        const bool taken = std::any_of(out.begin(), out.end(), [&](const auto& p) { return p.first == name; });
        if (!taken) out.emplace_back(name, "mathsym");
    }
    std::sort(out.begin(), out.end());
    return out;
}

// The top-level frame spans engine construction and teardown.
Document convert(std::string_view source, std::shared_ptr<const Registry> registry, const ConvertOptions& options) {
    auto profiler = std::make_shared<Profiler>(options.profile, options.profile_clock);
    const auto toplevel = profiler->enter(Profiler::kTopLevel);
    Document doc;
    {
        Engine engine(std::move(registry), options, profiler);
        try {
            engine.set_source(source);
            engine.run();
            doc = engine.finish();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::FatalConversionError) throw;
            if (!e.pos().known() && engine.last_position().known()) {
                throw Error::fatal(Error(e.code(), e.detail(), engine.last_position()));
            }
            throw Error::fatal(e);
        }
    }
    profiler->leave(toplevel);
    profiler->finish();
    if (options.profile) doc.profile = profiler->report();
    return doc;
}

}  // namespace semtex
