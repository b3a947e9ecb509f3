// xml.hpp - compact, byte-stable XML serialization
//
// No indentation is added. Attributes are double-quoted in authored order.
// Text escapes & < >; attribute values escape & < > " and TAB/LF/CR as
// character references so they survive attribute-value normalization.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "semtex/doc.hpp"

namespace semtex::xml {

inline constexpr std::string_view kDeclaration = R"(<?xml version="1.0" encoding="UTF-8"?>)";
inline constexpr std::string_view kMathMLNamespace = "http://www.w3.org/1998/Math/MathML";
inline constexpr std::string_view kSvgNamespace = "http://www.w3.org/2000/svg";
inline constexpr std::string_view kXhtmlNamespace = "http://www.w3.org/1999/xhtml";

void escape_text(std::string& out, std::string_view text);
void escape_attr(std::string& out, std::string_view text);

// Writes a node. MathNode becomes <Math tex=.. display=..><math..>..</math></Math>;
// GraphicsNode writes its svg element.
void write(std::string& out, const DocNode& node);
std::string to_string(const DocNode& node);

// The element form of a MathNode as written into the intermediate document.
Element math_wrapper(const MathNode& m);

// Parses a complete document with expat (no namespace processing, so names
// keep their prefixes). Adjacent character data is merged into one Text.
// Returns nullopt on any well-formedness error, describing it in `error`.
std::optional<Element> parse(std::string_view bytes, std::string* error = nullptr);

}  // namespace semtex::xml

namespace semtex {

// Declaration + root element. Throws SchemaViolation when validate() fails.
std::string serialize_xml(const Document& doc);

}  // namespace semtex
