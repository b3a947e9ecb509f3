// doc.hpp - the intermediate semantic XML document
//
// A DocNode is an element, a text run, a math formula (source TeX plus its
// MathML tree) or a picture (an SVG element tree). The same Element type is
// used for the SVG and HTML trees produced downstream; only the intermediate
// document is checked against the schema vocabulary in schema.hpp.
#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semtex/diagnostics.hpp"
#include "semtex/math_tree.hpp"

namespace semtex {

class DocNode;

struct Attribute {
    std::string name;
    std::string value;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Element {
    std::string name;
    std::vector<Attribute> attrs;
    std::vector<DocNode> children;

    Element() = default;
    explicit Element(std::string n, std::vector<Attribute> a = {}, std::vector<DocNode> c = {});

    const std::string* attr(std::string_view key) const;
    // Replaces an existing value or appends a new attribute at the end.
    void set_attr(std::string_view key, std::string value);
    void remove_attr(std::string_view key);
};

bool operator==(const Element& a, const Element& b);

struct Text {
    std::string text;

    friend bool operator==(const Text&, const Text&) = default;
};

enum class MathDisplay { Inline, Block };

struct MathNode {
    std::string tex;
    math::MathTree content = math::MathTree::mrow();
    MathDisplay display = MathDisplay::Inline;

    friend bool operator==(const MathNode&, const MathNode&) = default;
};

struct GraphicsNode {
    Element svg;

    friend bool operator==(const GraphicsNode& a, const GraphicsNode& b) { return a.svg == b.svg; }
};

class DocNode {
public:
    using Variant = std::variant<Element, Text, MathNode, GraphicsNode>;

    DocNode(Element e) : v_(std::move(e)) {}
    DocNode(Text t) : v_(std::move(t)) {}
    DocNode(MathNode m) : v_(std::move(m)) {}
    DocNode(GraphicsNode g) : v_(std::move(g)) {}

    static DocNode text(std::string s) { return DocNode(Text{std::move(s)}); }

    bool is_element() const { return std::holds_alternative<Element>(v_); }
    bool is_element(std::string_view name) const { return is_element() && element().name == name; }
    bool is_text() const { return std::holds_alternative<Text>(v_); }
    bool is_math() const { return std::holds_alternative<MathNode>(v_); }
    bool is_graphics() const { return std::holds_alternative<GraphicsNode>(v_); }

    const Element& element() const { return std::get<Element>(v_); }
    Element& element() { return std::get<Element>(v_); }
    const std::string& text() const { return std::get<Text>(v_).text; }
    std::string& text() { return std::get<Text>(v_).text; }
    const MathNode& math() const { return std::get<MathNode>(v_); }
    const GraphicsNode& graphics() const { return std::get<GraphicsNode>(v_); }

    const Variant& variant() const { return v_; }

    friend bool operator==(const DocNode& a, const DocNode& b);

private:
    Variant v_;
};

struct ProfileRecord {
    std::string name;
    std::uint64_t calls = 0;
    std::chrono::nanoseconds inclusive{0};
    std::chrono::nanoseconds exclusive{0};
};

struct Document {
    DocNode root = DocNode(Element("document"));
    // label key -> xml:id of the labelled element
    std::map<std::string, std::string> labels;
    std::optional<std::vector<ProfileRecord>> profile;
    std::vector<Diagnostic> diagnostics;

    const Element& root_element() const { return root.element(); }
    Element& root_element() { return root.element(); }
};

// Concatenated text of all Text descendants.
std::string text_content(const DocNode& node);

}  // namespace semtex
