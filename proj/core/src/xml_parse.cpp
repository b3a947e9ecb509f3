#include <expat.h>

#include "semtex/xml.hpp"

namespace semtex::xml {

namespace {

struct Builder {
    std::vector<Element> stack;
    std::optional<Element> root;

    static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
        auto* b = static_cast<Builder*>(data);
        Element e(name);
        for (int i = 0; atts[i]; i += 2) e.attrs.push_back({atts[i], atts[i + 1]});
        b->stack.push_back(std::move(e));
    }

    static void on_end(void* data, const XML_Char*) {
        auto* b = static_cast<Builder*>(data);
        Element e = std::move(b->stack.back());
        b->stack.pop_back();
        if (b->stack.empty()) {
            b->root = std::move(e);
        } else {
            b->stack.back().children.emplace_back(std::move(e));
        }
    }

    static void on_text(void* data, const XML_Char* s, int len) {
        auto* b = static_cast<Builder*>(data);
        if (b->stack.empty()) return;
        auto& kids = b->stack.back().children;
        if (!kids.empty() && kids.back().is_text()) {
            kids.back().text().append(s, static_cast<std::size_t>(len));
        } else {
            kids.push_back(DocNode::text(std::string(s, static_cast<std::size_t>(len))));
        }
    }
};

}  // namespace

std::optional<Element> parse(std::string_view bytes, std::string* error) {
    XML_Parser p = XML_ParserCreate("UTF-8");
    Builder b;
    XML_SetUserData(p, &b);
    XML_SetElementHandler(p, Builder::on_start, Builder::on_end);
    XML_SetCharacterDataHandler(p, Builder::on_text);
    const bool ok = XML_Parse(p, bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_OK;
    if (!ok && error) {
        *error = std::string(XML_ErrorString(XML_GetErrorCode(p))) + " at line " +
                 std::to_string(XML_GetCurrentLineNumber(p)) + ", column " +
                 std::to_string(XML_GetCurrentColumnNumber(p) + 1);
    }
    XML_ParserFree(p);
    if (!ok) return std::nullopt;
    return std::move(b.root);
}

}  // namespace semtex::xml
