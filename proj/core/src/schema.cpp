#include "semtex/schema.hpp"

#include <array>
#include <set>

namespace semtex::schema {

namespace {

constexpr std::string_view kLevels[] = {"1", "2", "3", "4", "5", "6"};
constexpr std::string_view kFonts[] = {"bold", "italic", "typewriter"};

constexpr AttrRule kIdOnly[] = {{"xml:id"}};
constexpr AttrRule kSectionAttrs[] = {{"level", true, kLevels}, {"xml:id"}, {"labels"}};
constexpr AttrRule kTextAttrs[] = {{"font", true, kFonts}, {"xml:id"}};
constexpr AttrRule kRefAttrs[] = {{"labelref", true}, {"href"}, {"class"}, {"xml:id"}};
constexpr AttrRule kAnchorAttrs[] = {{"xml:id", true}, {"labels"}};
constexpr AttrRule kErrorAttrs[] = {{"class"}, {"xml:id"}};

constexpr std::array<ElementSpec, 11> kElements{{
    {"document", Level::Root, Content::Body, kIdOnly},
    {"section", Level::Block, Content::Body, kSectionAttrs, true, true},
    {"title", Level::Title, Content::Inline, kIdOnly},
    {"para", Level::Block, Content::Paras, kIdOnly},
    {"p", Level::Para, Content::Inline, kIdOnly},
    {"picture", Level::Block, Content::Picture, kIdOnly},
    {"text", Level::Inline, Content::Inline, kTextAttrs},
    {"emph", Level::Inline, Content::Inline, kIdOnly},
    {"ref", Level::Inline, Content::Inline, kRefAttrs},
    {"anchor", Level::Inline, Content::Empty, kAnchorAttrs},
    {"error", Level::Inline, Content::Inline, kErrorAttrs},
}};

std::string describe(const DocNode& node) {
    if (node.is_element()) return "'" + node.element().name + "'";
    if (node.is_text()) return "text";
    if (node.is_math()) return "Math";
    return "graphics";
}

class Validator {
public:
    std::vector<Violation> out;

    void check_element(const Element& e, bool is_root) {
        const ElementSpec* spec = find(e.name);
        if (!spec) {
            add("unknown-element", "element '" + e.name + "' is not in the vocabulary");
            return;
        }
        if (is_root && spec->level != Level::Root) {
            add("root", "root element is '" + e.name + "', expected 'document'");
        }
        if (!is_root && spec->level == Level::Root) {
            add("root", "'document' used below the root");
        }
        check_attributes(e, *spec);
        check_children(e, *spec);
        for (const auto& c : e.children) {
            if (c.is_element()) check_element(c.element(), false);
            if (c.is_text() && c.text().empty()) add("empty-text", "empty text inside '" + e.name + "'");
        }
    }

private:
    std::set<std::string> ids_;

    void add(std::string rule, std::string msg) { out.push_back({std::move(rule), std::move(msg)}); }

    void check_attributes(const Element& e, const ElementSpec& spec) {
        std::set<std::string_view> seen;
        for (const auto& a : e.attrs) {
            if (!seen.insert(a.name).second) {
                add("duplicate-attribute", "attribute '" + a.name + "' repeated on '" + e.name + "'");
                continue;
            }
            const AttrRule* rule = nullptr;
            for (const auto& r : spec.attrs) {
                if (r.name == a.name) rule = &r;
            }
            if (!rule) {
                add("unknown-attribute", "attribute '" + a.name + "' not allowed on '" + e.name + "'");
                continue;
            }
            if (!rule->allowed_values.empty()) {
                bool ok = false;
                for (auto v : rule->allowed_values) ok = ok || v == a.value;
                if (!ok) {
                    add("attribute-value",
                        "value '" + a.value + "' not allowed for '" + e.name + "/@" + a.name + "'");
                }
            }
            if (a.name == "xml:id") {
                if (a.value.empty()) {
                    add("empty-id", "empty xml:id on '" + e.name + "'");
                } else if (!ids_.insert(a.value).second) {
                    add("duplicate-id", "xml:id '" + a.value + "' used more than once");
                }
            }
        }
        for (const auto& r : spec.attrs) {
            if (r.required && !e.attr(r.name)) {
                add("missing-attribute", "'" + e.name + "' requires attribute '" + std::string(r.name) + "'");
            }
        }
    }

    void misplaced(const DocNode& child, const Element& parent) {
        add("content", "element " + describe(child) + " not allowed inside '" + parent.name + "'");
    }

    void check_children(const Element& e, const ElementSpec& spec) {
        switch (spec.content) {
        case Content::Empty:
            for (const auto& c : e.children) misplaced(c, e);
            break;
        case Content::Inline:
            for (const auto& c : e.children) {
                const bool ok = c.is_text() || c.is_math() || (c.is_element() && is_inline(c.element().name));
                if (!ok) misplaced(c, e);
            }
            break;
        case Content::Paras:
            for (const auto& c : e.children) {
                if (!c.is_element("p")) misplaced(c, e);
            }
            break;
        case Content::Picture:
            if (e.children.size() != 1 || !e.children[0].is_graphics()) {
                if (e.children.empty()) {
                    add("content", "'" + e.name + "' requires one graphics child");
                }
                for (const auto& c : e.children) {
                    if (!c.is_graphics()) misplaced(c, e);
                }
                if (e.children.size() > 1) add("content", "'" + e.name + "' holds more than one graphic");
            }
            break;
        case Content::Body: {
            std::size_t i = 0;
            if (!e.children.empty() && e.children[0].is_element("title")) {
                i = 1;
            } else if (spec.title_required) {
                add("missing-title", "'" + e.name + "' must start with 'title'");
            }
            for (; i < e.children.size(); ++i) {
                const DocNode& c = e.children[i];
                const ElementSpec* cs = c.is_element() ? find(c.element().name) : nullptr;
                if (!cs || cs->level != Level::Block) misplaced(c, e);
            }
            break;
        }
        }
    }
};

}  // namespace

const ElementSpec* find(std::string_view name) {
    for (const auto& e : kElements) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::span<const ElementSpec> all() { return kElements; }

bool is_inline(std::string_view name) {
    const ElementSpec* s = find(name);
    return s && s->level == Level::Inline;
}

std::vector<Violation> validate_tree(const DocNode& root) {
    Validator v;
    if (!root.is_element()) {
        v.out.push_back({"root", "root is not an element"});
        return v.out;
    }
    v.check_element(root.element(), true);
    return v.out;
}

std::vector<Violation> validate(const Document& doc) { return validate_tree(doc.root); }

}  // namespace semtex::schema
