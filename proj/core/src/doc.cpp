#include "semtex/doc.hpp"

#include <algorithm>

namespace semtex {

Element::Element(std::string n, std::vector<Attribute> a, std::vector<DocNode> c)
    : name(std::move(n)), attrs(std::move(a)), children(std::move(c)) {}

const std::string* Element::attr(std::string_view key) const {
    for (const auto& a : attrs) {
        if (a.name == key) return &a.value;
    }
    return nullptr;
}

void Element::set_attr(std::string_view key, std::string value) {
    for (auto& a : attrs) {
        if (a.name == key) {
            a.value = std::move(value);
            return;
        }
    }
    attrs.push_back({std::string(key), std::move(value)});
}

void Element::remove_attr(std::string_view key) {
    std::erase_if(attrs, [key](const Attribute& a) { return a.name == key; });
}

bool operator==(const Element& a, const Element& b) {
    return a.name == b.name && a.attrs == b.attrs && a.children == b.children;
}

bool operator==(const DocNode& a, const DocNode& b) { return a.v_ == b.v_; }

namespace {

void collect_text(const DocNode& node, std::string& out) {
    if (node.is_text()) {
        out += node.text();
    } else if (node.is_element()) {
        for (const auto& c : node.element().children) collect_text(c, out);
    }
}

}  // namespace

std::string text_content(const DocNode& node) {
    std::string out;
    collect_text(node, out);
    return out;
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    switch (d.severity) {
    case Severity::Info: out = "info: "; break;
    case Severity::Warning: out = "warning: "; break;
    case Severity::Error: out = "error: "; break;
    }
    out += d.message;
    if (d.pos.known()) {
        out += " at line " + std::to_string(d.pos.line) + ", column " + std::to_string(d.pos.column);
    }
    return out;
}

}  // namespace semtex
