// engine_impl.hpp - engine internals shared by the engine_*.cpp files
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "semtex/engine.hpp"
#include "semtex/profiler.hpp"
#include "semtex/schema.hpp"
#include "semtex/tokenizer.hpp"

namespace semtex {

// Name of the primitive that closes the group opened by \begin.
inline constexpr std::string_view kEndEnvironment = "\x02endenv";

// \name for control sequences, the character for active characters.
std::string profile_name(const Token& t);

struct Engine::Impl {
    struct InputLevel {
        TokenList tokens;
        std::size_t pos = 0;
        Profiler::FrameId frame = 0;  // macro expansion this level belongs to
    };

    using Handler = void (Impl::*)(const Token& head);
    struct PrimitiveInfo {
        Handler handler;
        bool expandable = false;
        bool conditional = false;  // counts as \if... while skipping
        bool assignment = false;   // may follow \global
    };
    static const std::unordered_map<std::string, PrimitiveInfo>& primitives();

    // With a shared profiler the caller opens and closes the top-level frame.
    Impl(std::shared_ptr<const Registry> registry, ConvertOptions options, std::shared_ptr<Profiler> shared = nullptr);

    ConvertOptions opts;
    std::shared_ptr<Profiler> profiler_owner;
    Profiler& profiler;
    Profiler::FrameId toplevel_frame = 0;  // 0 when the caller owns it
    EngineState state;

    // --- input -----------------------------------------------------------
    std::vector<InputLevel> input;
    std::unique_ptr<Tokenizer> source;
    std::uint64_t reads = 0;
    SourcePos last_pos;
    std::size_t isolation = 0;     // nesting of Isolated scopes
    std::size_t outer_levels = 0;  // input levels saved by those scopes

    std::optional<Token> next_raw();
    void back_input(Token t);
    void back_input(const TokenList& tokens);
    void push_level(TokenList tokens, Profiler::FrameId frame = 0);
    void pop_level();
    bool input_empty() const;
    void check_deadline();

    // Swaps in a private input stack holding `tokens`; restores on scope exit.
    class Isolated {
    public:
        Isolated(Impl& e, TokenList tokens);
        ~Isolated();
        Isolated(const Isolated&) = delete;
        Isolated& operator=(const Isolated&) = delete;
        // remaining tokens, after reading stopped
        TokenList rest();

    private:
        Impl& e_;
        std::vector<InputLevel> saved_input_;
        std::unique_ptr<Tokenizer> saved_source_;
    };

    // --- expansion -------------------------------------------------------
    const Binding* meaning(const Token& t) const;
    const PrimitiveInfo* primitive_info(const Binding* b) const;
    bool is_expandable(const Binding* b) const;
    bool is_primitive(const Token& t, Handler h) const;
    void expand(const Token& head, const Binding& b);
    std::optional<Token> next_expanded();
    std::optional<Token> next_nonblank_expanded();
    // Throws MissingArgument("<what> (end of input)") at end of input.
    Token need_nonblank(std::string_view what);
    bool expand_step();
    TokenList expand_rest();

    std::vector<TokenList> read_arguments(const Token& head, const ArgSpec& spec);
    TokenList read_undelimited(const Token& head);
    TokenList read_delimited(const Token& head, const TokenList& delimiter);
    TokenList read_balanced(const Token& open);
    void expand_macro(const Token& head, const MacroBinding& m);

    // conditionals
    enum class Branch { True, Else };
    std::vector<Branch> conds;
    void conditional(bool value);
    bool skip_conditional(bool stop_at_else);
    char32_t relation(const Token& head);

    // numbers and dimensions
    std::int32_t scan_int();
    Dimension scan_dimension();
    std::optional<std::int64_t> internal_int(const Token& t);
    std::int64_t scan_digits(const Token& first, int radix);
    int scan_register_index();
    char32_t scan_char_code();
    bool scan_keyword(std::string_view word);
    void scan_optional_equals();
    void skip_optional_space();
    TokenList string_tokens(std::string_view s);
    TokenList the_tokens(const Token& head);

    // --- assignments -----------------------------------------------------
    bool global_pending = false;
    bool take_global() { return std::exchange(global_pending, false); }
    void define(const Token& head, bool expand_body, bool global);
    BindingPtr relax_binding;

    // --- digestion -------------------------------------------------------
    std::vector<Element> open;  // open[0] is the document
    std::vector<Diagnostic> diags;
    std::vector<std::string> messages;
    std::map<std::string, std::string> labels;
    int anchor_count = 0;
    std::optional<gfx::GraphicsState> picture;
    bool picture_text_warned = false;
    std::size_t picture_base = 0;  // open.size() when the picture started

    void warn(std::string msg, SourcePos pos = {});
    // Undelimited argument, detokenized and trimmed.
    std::string arg_string(const Token& head);
    // Material in a picture that is not inside \gdv@text.
    bool outside_picture_text() const;
    void main_loop();
    void dispatch(const Token& t);
    void handle_char(const Token& t);
    void undefined(const Token& t);
    void run_primitive(const Token& head, const PrimitiveBinding& p);
    void run_constructor(const Token& head, const ConstructorBinding& c);
    std::vector<DocNode> digest_fragment(TokenList tokens);

    Element& top() { return open.back(); }
    bool in_fragment() const;
    void ensure_horizontal();
    void end_paragraph();
    void append(DocNode node);
    void append_text(std::string_view text);
    void place(DocNode node);
    void open_section(Element section);
    void close_top();

    void math(const Token& head, bool display, const std::function<bool(const Token&)>& is_end);
    void emit_math(TokenList body, bool display, SourcePos pos);

    bool graphics_ok(const Token& head);
    Dimension dimen_argument(const Token& head);
    std::int32_t int_argument(const Token& head);
    double real_argument(const Token& head);
    void graphics_guard(const Token& head, const std::function<void()>& f);

    Document finish();

    // --- primitive handlers ----------------------------------------------
    void p_relax(const Token&) {}
    void p_par(const Token&);
    void p_begingroup(const Token&);
    void p_endgroup(const Token&);
    void p_def(const Token&);
    void p_gdef(const Token&);
    void p_edef(const Token&);
    void p_xdef(const Token&);
    void p_let(const Token&);
    void p_global(const Token&);
    void p_count(const Token&);
    void p_dimen(const Token&);
    void p_advance(const Token&);
    void p_multiply(const Token&);
    void p_divide(const Token&);
    void arith(const Token& head, int op);
    void p_catcode(const Token&);
    void p_the(const Token&);
    void p_number(const Token&);
    void p_ifnum(const Token&);
    void p_ifdim(const Token&);
    void p_ifx(const Token&);
    void p_if(const Token&);
    void p_iftrue(const Token&);
    void p_iffalse(const Token&);
    void p_else(const Token&);
    void p_fi(const Token&);
    void p_csname(const Token&);
    void p_endcsname(const Token&);
    void p_expandafter(const Token&);
    void p_noexpand(const Token&);
    void p_message(const Token&);
    void p_begin(const Token&);
    void p_end(const Token&);
    void p_endenv(const Token&);
    void p_label(const Token&);
    void p_constructor(const Token&);
    void p_escapedchar(const Token&);
    void p_mathsym(const Token&);
    void p_math_inline(const Token&);
    void p_math_display(const Token&);
    void p_math_close(const Token&);
    void p_gpicture(const Token&);
    void p_endgpicture(const Token&);
    void p_moveto(const Token&);
    void p_lineto(const Token&);
    void p_curveto(const Token&);
    void p_closepath(const Token&);
    void p_stroke(const Token&);
    void p_fill(const Token&);
    void p_linewidth(const Token&);
    void p_color(const Token&);
    void p_transform(const Token&);
    void p_gtext(const Token&);
};

}  // namespace semtex
