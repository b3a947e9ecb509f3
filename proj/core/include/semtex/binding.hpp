// binding.hpp - what a control sequence means: macro, primitive, constructor
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "semtex/catcode.hpp"
#include "semtex/token.hpp"

namespace semtex {

// One element of a \def parameter text.
struct ParamDesc {
    enum class Kind { Undelimited, Delimited, LiteralMatch };
    Kind kind = Kind::Undelimited;
    // terminator for Delimited, the tokens to match for LiteralMatch
    TokenList tokens;

    friend bool operator==(const ParamDesc&, const ParamDesc&) = default;
};

class ArgSpec {
public:
    ArgSpec() = default;
    // Throws BadParameterIndex for more than 9 parameters.
    explicit ArgSpec(std::vector<ParamDesc> items);

    // Parses a TeX parameter text such as `#1#2` or `(#1,#2)` or `#1;`.
    // Parameter numbers must run 1, 2, ... in order.
    static ArgSpec parse(const TokenList& parameter_text);
    // Shorthand for n undelimited parameters.
    static ArgSpec undelimited(int n);

    const std::vector<ParamDesc>& items() const { return items_; }
    int arity() const { return arity_; }

    friend bool operator==(const ArgSpec&, const ArgSpec&) = default;

private:
    std::vector<ParamDesc> items_;
    int arity_ = 0;
};

enum class InsertMode { Digested, VerbatimText };

// Attribute values are literal text with #n insertion points, always
// inserted as verbatim text.
struct AttrTemplate {
    std::string name;
    // alternating literal text and argument references
    struct Part {
        std::string literal;
        int arg = 0;  // > 0 for an insertion
        friend bool operator==(const Part&, const Part&) = default;
    };
    std::vector<Part> parts;

    friend bool operator==(const AttrTemplate&, const AttrTemplate&) = default;
};

struct TemplateItem {
    enum class Kind { ElementOpen, ElementClose, ArgInsert, LiteralText };
    Kind kind = Kind::LiteralText;
    std::string name;                 // ElementOpen/ElementClose
    std::vector<AttrTemplate> attrs;  // ElementOpen
    int arg = 0;                      // ArgInsert
    InsertMode mode = InsertMode::Digested;
    std::string text;                 // LiteralText

    friend bool operator==(const TemplateItem&, const TemplateItem&) = default;
};

// Surface syntax: literal XML whose element names come from the schema
// vocabulary, with `#n` (digested argument) or `#*n` (argument as verbatim
// text) in content and `#n` inside attribute values. `<x/>` is accepted.
class ConstructorTemplate {
public:
    ConstructorTemplate() = default;
    // Throws ConstructorTemplateInvalid on unbalanced or unknown elements,
    // malformed tags, or argument numbers beyond `arity`.
    static ConstructorTemplate parse(std::string_view surface, int arity);

    const std::vector<TemplateItem>& items() const { return items_; }
    // Name of the first element opened at top level, if any.
    std::optional<std::string> first_element() const;

    friend bool operator==(const ConstructorTemplate&, const ConstructorTemplate&) = default;

private:
    std::vector<TemplateItem> items_;
};

struct MacroBinding {
    ArgSpec spec;
    TokenList body;
    bool expandable = true;

    friend bool operator==(const MacroBinding&, const MacroBinding&) = default;
};

struct PrimitiveBinding {
    std::string id;

    friend bool operator==(const PrimitiveBinding&, const PrimitiveBinding&) = default;
};

struct ConstructorBinding {
    ArgSpec spec;
    ConstructorTemplate tmpl;

    friend bool operator==(const ConstructorBinding&, const ConstructorBinding&) = default;
};

// \let to a character token.
struct CharBinding {
    Token token;

    friend bool operator==(const CharBinding&, const CharBinding&) = default;
};

using Binding = std::variant<MacroBinding, PrimitiveBinding, ConstructorBinding, CharBinding>;
using BindingPtr = std::shared_ptr<const Binding>;

// Checks that body parameters are within the spec's arity.
void check_macro(const ArgSpec& spec, const TokenList& body);

// Immutable once built; shared by concurrent conversions.
class Registry {
public:
    using Map = std::unordered_map<std::string, BindingPtr>;

    Registry() = default;
    Registry(Map bindings, CatcodeTable catcodes)
        : bindings_(std::move(bindings)), catcodes_(std::move(catcodes)) {}

    // nullptr when undefined
    const BindingPtr* find(const std::string& key) const {
        auto it = bindings_.find(key);
        return it == bindings_.end() ? nullptr : &it->second;
    }
    const Map& bindings() const { return bindings_; }
    // Catcodes in force at the start of a document.
    const CatcodeTable& catcodes() const { return catcodes_; }

private:
    Map bindings_;
    CatcodeTable catcodes_;
};

}  // namespace semtex
