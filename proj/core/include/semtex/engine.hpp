// engine.hpp - TeX macro expansion and digestion into document nodes
//
// The engine reads tokens line by line, expands macros and expandable
// primitives, runs the remaining primitives and constructor bindings, and
// builds the intermediate document. Bindings come from an immutable Registry
// shared between conversions; everything mutable lives in one Engine.
#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "semtex/binding.hpp"
#include "semtex/dimension.hpp"
#include "semtex/doc.hpp"
#include "semtex/graphics.hpp"
#include "semtex/token.hpp"

namespace semtex {

enum class Mode { Vertical, Horizontal, Math };

enum class GroupKind { Bottom, Simple, SemiSimple, Environment };

struct ConvertOptions {
    // Undefined control sequences and recoverable math/graphics errors are
    // fatal instead of producing warnings and `error` elements.
    bool strict = false;
    bool profile = false;
    std::size_t max_expansion_depth = 10000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    gfx::FontModel font;
    // Clock for profiling; steady_clock when empty.
    std::function<std::chrono::nanoseconds()> profile_clock;
};

// Grouped interpreter state: bindings, registers and catcodes, with TeX's
// save-stack semantics for local and \global assignments.
class EngineState {
public:
    explicit EngineState(std::shared_ptr<const Registry> registry);

    const Registry& registry() const { return *registry_; }

    // nullptr when undefined
    const BindingPtr& lookup(const std::string& key) const;
    void set_binding(const std::string& key, BindingPtr binding, bool global = false);

    std::int32_t count(int index) const { return counts_.at(static_cast<std::size_t>(index)); }
    void set_count(int index, std::int32_t value, bool global = false);
    Dimension dimen(int index) const { return dimens_.at(static_cast<std::size_t>(index)); }
    void set_dimen(int index, Dimension value, bool global = false);

    const CatcodeTable& catcodes() const { return catcodes_; }
    void set_catcode(char32_t ch, Catcode cat, bool global = false);

    void begin_group(GroupKind kind, std::string env = {}, SourcePos pos = {});
    // Throws UnbalancedGroup at the outermost level or when `kind` does not
    // match the innermost open group.
    void end_group(GroupKind kind, std::string_view env = {});
    // 1 when no group is open.
    std::size_t depth() const { return frames_.size(); }
    GroupKind innermost_kind() const { return frames_.back().kind; }
    const std::string& innermost_env() const { return frames_.back().env; }
    SourcePos innermost_pos() const { return frames_.back().opened_at; }

    Mode mode = Mode::Vertical;

    struct Snapshot {
        std::unordered_map<std::string, const Binding*> bindings;
        std::array<std::int32_t, 256> counts{};
        std::array<std::int32_t, 256> dimens{};
        CatcodeTable catcodes;

        friend bool operator==(const Snapshot&, const Snapshot&) = default;
    };
    // Everything a group end is supposed to restore.
    Snapshot snapshot() const;
    // Bindings that differ from the registry's, sorted by key.
    std::vector<std::pair<std::string, BindingPtr>> changed_bindings() const;

private:
    struct BindingEntry {
        BindingPtr binding;
        int level = 1;
    };
    struct Saved {
        enum class What { Binding, Count, Dimen, Catcode } what;
        std::string key;
        int index = 0;
        char32_t ch = 0;
        std::optional<BindingEntry> binding;  // nullopt: not overridden before
        std::int32_t value = 0;
        int level = 1;
    };
    struct Frame {
        GroupKind kind;
        std::string env;
        SourcePos opened_at;
        std::vector<Saved> saved;
    };

    int level() const { return static_cast<int>(frames_.size()); }
    void restore(const Saved& s);

    std::shared_ptr<const Registry> registry_;
    std::unordered_map<std::string, BindingEntry> overlay_;
    std::array<std::int32_t, 256> counts_{};
    std::array<int, 256> count_levels_{};
    std::array<Dimension, 256> dimens_{};
    std::array<int, 256> dimen_levels_{};
    CatcodeTable catcodes_;
    std::unordered_map<char32_t, int> catcode_levels_;
    std::vector<Frame> frames_;
};

// The whole pipeline front half: tokenize, expand, digest. Engine errors are
// rethrown as FatalConversionError carrying the source position.
Document convert(std::string_view source, std::shared_ptr<const Registry> registry,
                 const ConvertOptions& options = {});

class Profiler;

class Engine {
public:
    explicit Engine(std::shared_ptr<const Registry> registry, ConvertOptions options = {});
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    EngineState& state();
    const EngineState& state() const;

    // \def without going through the tokenizer. Throws BadParameterIndex.
    void define_macro(const std::string& name, ArgSpec spec, TokenList body, bool global = false);

    // Input: a source read line by line, and token lists pushed in front of
    // whatever is pending.
    void set_source(std::string_view source);
    void push_tokens(TokenList tokens);
    bool input_empty() const;

    // Expands the head of the input once if it is expandable. Returns false
    // (leaving the head in place) when it is not, or when input is empty.
    bool expand_step();
    // Reads everything left, expanding as \edef does.
    TokenList expand_all();
    // \edef-style full expansion of a token list in isolation.
    TokenList expand_fully(TokenList tokens);

    Dimension scan_dimension();
    std::int32_t scan_int();

    // Digests the remaining input into the document under construction.
    void run();
    // Digests a token list in isolation, in horizontal mode, and returns
    // the nodes it produced instead of adding them to the document.
    std::vector<DocNode> digest(TokenList tokens);

    // Closes open paragraphs and sections and returns the document. Throws
    // UnbalancedGroup/UnbalancedConditional for unclosed constructs.
    Document finish();

    std::vector<ProfileRecord> profile_report() const;
    const std::vector<std::string>& messages() const;
    const std::vector<Diagnostic>& diagnostics() const;
    // Position of the most recently read token that had one.
    SourcePos last_position() const;

    // Built-in meanings as (control sequence name, primitive id) pairs.
    static std::vector<std::pair<std::string, std::string>> primitive_bindings();

    struct Impl;

private:
    friend Document convert(std::string_view, std::shared_ptr<const Registry>, const ConvertOptions&);
    // Records into `profiler`; the caller owns the top-level frame and the report.
    Engine(std::shared_ptr<const Registry> registry, ConvertOptions options, std::shared_ptr<Profiler> profiler);

    std::unique_ptr<Impl> impl_;
};


}  // namespace semtex
