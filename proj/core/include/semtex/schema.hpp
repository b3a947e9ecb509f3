// schema.hpp - element vocabulary of the intermediate document
//
// One table drives validation, constructor-template checking, paragraph
// handling in the engine and the HTML mapping.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semtex/doc.hpp"

namespace semtex::schema {

inline constexpr std::string_view kVersion = "1";

enum class Content {
    Empty,     // no children
    Inline,    // Text | inline elements | Math
    Body,      // (title?) followed by para | section | picture
    Paras,     // p*
    Picture,   // exactly one GraphicsNode
};

enum class Level {
    Root,    // document
    Block,   // appears among para/section/picture
    Title,   // first child of document/section
    Para,    // inside para
    Inline,  // horizontal material
};

struct AttrRule {
    std::string_view name;
    bool required = false;
    std::span<const std::string_view> allowed_values;  // empty = any value
};

struct ElementSpec {
    std::string_view name;
    Level level;
    Content content;
    std::span<const AttrRule> attrs;
    bool title_required = false;  // Body content: title must come first
    // Stays open after its constructor finishes; closed by a sibling of the
    // same or outer level or by the end of its container.
    bool auto_close = false;
};

// nullptr for names outside the vocabulary.
const ElementSpec* find(std::string_view name);
std::span<const ElementSpec> all();

bool is_inline(std::string_view name);

struct Violation {
    std::string rule;     // short machine-readable tag
    std::string message;  // names the elements involved

    friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty iff the tree conforms to the vocabulary and parenting rules and
// xml:id values are unique.
std::vector<Violation> validate(const Document& doc);
std::vector<Violation> validate_tree(const DocNode& root);

}  // namespace semtex::schema
