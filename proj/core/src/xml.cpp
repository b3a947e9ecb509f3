#include "semtex/xml.hpp"

#include "semtex/math.hpp"
#include "semtex/schema.hpp"

namespace semtex::xml {

void escape_text(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '\r': out += "&#13;"; break;
        default: out += c; break;
        }
    }
}

void escape_attr(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\t': out += "&#9;"; break;
        case '\n': out += "&#10;"; break;
        case '\r': out += "&#13;"; break;
        default: out += c; break;
        }
    }
}

Element math_wrapper(const MathNode& m) {
    Element e("Math", {{"tex", m.tex}, {"display", m.display == MathDisplay::Block ? "block" : "inline"}});
    e.children.emplace_back(math::mathml_serialize(m.content, m.display));
    return e;
}

namespace {

void write_element(std::string& out, const Element& e) {
    out += '<';
    out += e.name;
    for (const auto& a : e.attrs) {
        out += ' ';
        out += a.name;
        out += "=\"";
        escape_attr(out, a.value);
        out += '"';
    }
    if (e.children.empty()) {
        out += "/>";
        return;
    }
    out += '>';
    for (const auto& c : e.children) write(out, c);
    out += "</";
    out += e.name;
    out += '>';
}

}  // namespace

void write(std::string& out, const DocNode& node) {
    if (node.is_element()) {
        write_element(out, node.element());
    } else if (node.is_text()) {
        escape_text(out, node.text());
    } else if (node.is_math()) {
        write_element(out, math_wrapper(node.math()));
    } else {
        write_element(out, node.graphics().svg);
    }
}

std::string to_string(const DocNode& node) {
    std::string out;
    write(out, node);
    return out;
}

}  // namespace semtex::xml

namespace semtex {

std::string serialize_xml(const Document& doc) {
    auto violations = schema::validate(doc);
    if (!violations.empty()) {
        throw Error(ErrorCode::SchemaViolation, violations.front().message);
    }
    std::string out(xml::kDeclaration);
    xml::write(out, doc.root);
    return out;
}

}  // namespace semtex
