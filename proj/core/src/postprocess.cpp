#include "semtex/postprocess.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "semtex/math.hpp"
#include "semtex/schema.hpp"
#include "semtex/xml.hpp"

namespace semtex {

namespace {

constexpr std::string_view kIndexPath = "index.xhtml";
constexpr std::string_view kStyle =
    "body{font-family:serif;max-width:42em;margin:auto;padding:1em;line-height:1.45}"
    ".error{color:#a00}.picture{margin:1em 0}nav.toc ol{list-style:none}";

const std::string* id_of(const Element& e) { return e.attr("xml:id"); }

std::string title_of(const Element& e) {
    for (const auto& c : e.children) {
        if (c.is_element("title")) return text_content(c);
    }
    return {};
}

std::string slugify(std::string_view title) {
    std::string slug;
    for (unsigned char c : title) {
        const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        if (alnum) {
            slug += static_cast<char>(std::tolower(c));
        } else if (!slug.empty() && slug.back() != '-') {
            slug += '-';
        }
    }
    if (slug.size() > 40) slug.resize(40);
    while (!slug.empty() && slug.back() == '-') slug.pop_back();
    return slug.empty() ? "section" : slug;
}

// Paths of the top-level section pages, in document order.
std::vector<std::string> section_paths(const Element& root) {
    std::vector<std::string> out;
    std::set<std::string> used{std::string(kIndexPath)};
    int n = 0;
    for (const auto& c : root.children) {
        if (!c.is_element("section")) continue;
        const std::string base = "s" + std::to_string(++n) + "-" + slugify(title_of(c.element()));
        std::string path = base + ".xhtml";
        for (int k = 2; used.contains(path); ++k) path = base + "-" + std::to_string(k) + ".xhtml";
        used.insert(path);
        out.push_back(std::move(path));
    }
    return out;
}

void collect_ids(const Element& e, const std::string& page, std::map<std::string, std::string>& out) {
    if (const std::string* id = id_of(e)) out.emplace(*id, page);
    for (const auto& c : e.children) {
        if (c.is_element()) collect_ids(c.element(), page, out);
    }
}

std::map<std::string, std::string> id_pages(const Element& root, SplitLevel level) {
    std::map<std::string, std::string> out;
    const std::string index(kIndexPath);
    if (level == SplitLevel::None) {
        collect_ids(root, index, out);
        return out;
    }
    const auto paths = section_paths(root);
    std::size_t n = 0;
    if (const std::string* id = id_of(root)) out.emplace(*id, index);
    for (const auto& c : root.children) {
        if (!c.is_element()) continue;
        collect_ids(c.element(), c.is_element("section") ? paths[n++] : index, out);
    }
    return out;
}

void collect_titles(const Element& e, std::map<std::string, std::string>& out) {
    if (e.name == "section") {
        if (const std::string* id = id_of(e)) out.emplace(*id, title_of(e));
    }
    for (const auto& c : e.children) {
        if (c.is_element()) collect_titles(c.element(), out);
    }
}

struct RefResolver {
    Document& doc;
    const std::map<std::string, std::string>& pages;
    const std::map<std::string, std::string>& titles;

    void walk(Element& e, const std::string& page) {
        if (e.name == "ref") {
            resolve(e, page);
            return;
        }
        for (auto& c : e.children) {
            if (c.is_element()) walk(c.element(), page);
        }
    }

    void resolve(Element& ref, const std::string& page) {
        const std::string key = ref.attr("labelref") ? *ref.attr("labelref") : std::string();
        auto label = doc.labels.find(key);
        const auto target = label == doc.labels.end() ? pages.end() : pages.find(label->second);
        if (target == pages.end()) {
            ref.set_attr("class", "undefined");
            ref.remove_attr("href");
            doc.diagnostics.push_back({Severity::Warning, "reference to undefined label '" + key + "'", {}});
            if (ref.children.empty()) ref.children.push_back(DocNode::text(key));
            return;
        }
        const std::string& id = target->first;
        ref.set_attr("href", (target->second == page ? std::string() : target->second) + "#" + id);
        if (ref.children.empty()) {
            auto t = titles.find(id);
            ref.children.push_back(DocNode::text(t != titles.end() && !t->second.empty() ? t->second : key));
        }
    }
};

// --- HTML lowering ---------------------------------------------------------

class Lowering {
public:
    Element lower_page(const Page& page) {
        Element body("body");
        const Element& c = page.content;
        if (c.name == "document") {
            copy_id(c, body);
            for (const auto& child : c.children) lower_into(child, body, 1);
            if (!page.toc.empty()) {
                Element nav("nav", {{"class", "toc"}});
                nav.children.emplace_back(Element("h2", {}, {DocNode::text("Contents")}));
                nav.children.emplace_back(toc_list(page.toc));
                body.children.emplace_back(std::move(nav));
            }
        } else {
            lower_into(DocNode(c), body, 1);
        }
        return body;
    }

private:
    static void copy_id(const Element& from, Element& to) {
        if (const std::string* id = id_of(from)) to.set_attr("id", *id);
    }

    static Element toc_list(const std::vector<TocEntry>& entries) {
        Element ol("ol");
        for (const auto& e : entries) {
            Element li("li", {}, {DocNode(Element("a", {{"href", e.href}}, {DocNode::text(e.title)}))});
            if (!e.children.empty()) li.children.emplace_back(toc_list(e.children));
            ol.children.emplace_back(std::move(li));
        }
        return ol;
    }

    static int heading_level(const Element& section) {
        const std::string* v = section.attr("level");
        const int l = v ? std::atoi(v->c_str()) : 1;
        return std::clamp(l, 1, 6);
    }

    void lower_children(const Element& from, Element& to, int heading) {
        for (const auto& c : from.children) lower_into(c, to, heading);
    }

    // `heading`: level of a title met at this point
    void lower_into(const DocNode& node, Element& out, int heading) {
        if (node.is_text()) {
            out.children.push_back(node);
            return;
        }
        if (node.is_math()) {
            Element m = math::mathml_serialize(node.math().content, node.math().display);
            m.set_attr("alttext", node.math().tex);
            out.children.emplace_back(std::move(m));
            return;
        }
        if (node.is_graphics()) {
            out.children.emplace_back(lower_foreign(node.graphics().svg, false));
            return;
        }
        const Element& e = node.element();
        Element h;
        if (e.name == "section") {
            h = Element("section");
            copy_id(e, h);
            lower_children(e, h, heading_level(e));
        } else if (e.name == "title") {
            h = Element("h" + std::to_string(heading));
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "para") {
            h = Element("div", {{"class", "para"}});
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "p") {
            h = Element("p");
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "text") {
            const std::string* font = e.attr("font");
            const std::string tag = !font ? "span" : *font == "bold" ? "b" : *font == "italic" ? "i" : "code";
            h = Element(tag);
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "emph") {
            h = Element("em");
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "ref") {
            h = Element("a");
            if (const std::string* href = e.attr("href")) h.set_attr("href", *href);
            const std::string* cls = e.attr("class");
            h.set_attr("class", cls ? "ref " + *cls : "ref");
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "anchor") {
            h = Element("span");
            copy_id(e, h);
        } else if (e.name == "error") {
            const std::string* cls = e.attr("class");
            h = Element("span", {{"class", cls ? "error " + *cls : "error"}});
            copy_id(e, h);
            lower_children(e, h, heading);
        } else if (e.name == "picture") {
            h = Element("div", {{"class", "picture"}});
            copy_id(e, h);
            lower_children(e, h, heading);
        } else {
            throw Error(ErrorCode::UnmappedElement, "no HTML mapping for element '" + e.name + "'");
        }
        out.children.emplace_back(std::move(h));
    }

    // SVG is copied as is; intermediate nodes inside its XHTML islands are
    // lowered like paragraph content.
    Element lower_foreign(const Element& e, bool in_html) {
        Element out(e.name, e.attrs);
        const std::string* ns = e.attr("xmlns");
        const bool html = in_html || (ns && *ns == xml::kXhtmlNamespace);
        for (const auto& c : e.children) {
            if (c.is_element() && !(html && schema::find(c.element().name))) {
                out.children.emplace_back(lower_foreign(c.element(), html));
            } else {
                lower_into(c, out, 1);
            }
        }
        return out;
    }
};

bool is_void(std::string_view name) {
    return name == "meta" || name == "br" || name == "hr" || name == "img" || name == "link";
}

void write_html(std::string& out, const DocNode& node) {
    if (!node.is_element()) {
        xml::write(out, node);
        return;
    }
    const Element& e = node.element();
    out += '<';
    out += e.name;
    for (const auto& a : e.attrs) {
        out += ' ';
        out += a.name;
        out += "=\"";
        xml::escape_attr(out, a.value);
        out += '"';
    }
    if (e.children.empty() && is_void(e.name)) {
        out += "/>";
        return;
    }
    out += '>';
    for (const auto& c : e.children) write_html(out, c);
    out += "</";
    out += e.name;
    out += '>';
}

void scan_features(const DocNode& node, PageFeatures& f) {
    if (node.is_math()) {
        f.math = true;
    } else if (node.is_graphics()) {
        f.svg = true;
        scan_features(DocNode(node.graphics().svg), f);
    } else if (node.is_element()) {
        for (const auto& c : node.element().children) scan_features(c, f);
    }
}

TocEntry section_entry(const Element& s, const std::string& path, bool page_root);

std::vector<TocEntry> nested_entries(const Element& e, const std::string& path) {
    std::vector<TocEntry> out;
    for (const auto& c : e.children) {
        if (c.is_element("section")) out.push_back(section_entry(c.element(), path, false));
    }
    return out;
}

TocEntry section_entry(const Element& s, const std::string& path, bool page_root) {
    TocEntry entry;
    entry.title = title_of(s);
    const std::string* id = id_of(s);
    entry.href = page_root || !id ? path : path + "#" + *id;
    entry.children = nested_entries(s, path);
    return entry;
}

}  // namespace

SplitLevel parse_split_level(std::string_view text) {
    if (text == "none") return SplitLevel::None;
    if (text == "section") return SplitLevel::Section;
    throw Error(ErrorCode::InvalidArgument, "split level must be 'none' or 'section', not '" + std::string(text) + "'");
}

std::string page_path_for(const Document& doc, SplitLevel level, std::string_view id) {
    const auto pages = id_pages(doc.root_element(), level);
    auto it = pages.find(std::string(id));
    return it == pages.end() ? std::string() : it->second;
}

Document resolve_refs(Document doc, SplitLevel level) {
    const auto pages = id_pages(doc.root_element(), level);
    std::map<std::string, std::string> titles;
    collect_titles(doc.root_element(), titles);
    RefResolver r{doc, pages, titles};
    Element& root = doc.root_element();
    const std::string index(kIndexPath);
    if (level == SplitLevel::None) {
        r.walk(root, index);
        return doc;
    }
    const auto paths = section_paths(root);
    std::size_t n = 0;
    for (auto& c : root.children) {
        if (!c.is_element()) continue;
        r.walk(c.element(), c.is_element("section") ? paths[n++] : index);
    }
    return doc;
}

std::vector<Page> split_pages(const Document& doc, SplitLevel level) {
    const Element& root = doc.root_element();
    std::string title = title_of(root);
    if (title.empty()) title = "Untitled";
    std::vector<Page> pages;
    if (level == SplitLevel::None) {
        pages.push_back({"index", title, root, std::string(kIndexPath), {}, {}});
        return pages;
    }
    Page index{"index", title, Element(root.name, root.attrs), std::string(kIndexPath), {}, {}};
    const auto paths = section_paths(root);
    std::size_t n = 0;
    std::vector<Page> sections;
    for (const auto& c : root.children) {
        if (!c.is_element("section")) {
            index.content.children.push_back(c);
            continue;
        }
        const Element& s = c.element();
        const std::string* id = id_of(s);
        Page p{id ? *id : "page" + std::to_string(n + 1), title_of(s), s, paths[n++], {}, {}};
        index.nav_children.push_back(p.id);
        sections.push_back(std::move(p));
    }
    pages.push_back(std::move(index));
    for (auto& p : sections) pages.push_back(std::move(p));
    if (pages.size() > 1) {
        std::vector<TocEntry> toc = make_toc(pages);
        pages.front().toc.assign(toc.begin() + 1, toc.end());
    }
    return pages;
}

std::vector<TocEntry> make_toc(const std::vector<Page>& pages) {
    std::vector<TocEntry> out;
    for (const Page& p : pages) {
        if (p.content.name == "section") {
            out.push_back(section_entry(p.content, p.path, true));
        } else {
            out.push_back({p.title, p.path, nested_entries(p.content, p.path)});
        }
    }
    return out;
}

Element to_html5(const Page& page, std::string_view language) {
    const std::string lang(language);
    Element html("html", {{"xmlns", std::string(xml::kXhtmlNamespace)}, {"lang", lang}, {"xml:lang", lang}});
    Element head("head");
    head.children.emplace_back(Element("meta", {{"charset", "utf-8"}}));
    head.children.emplace_back(Element("title", {}, {DocNode::text(page.title)}));
    head.children.emplace_back(Element("style", {}, {DocNode::text(std::string(kStyle))}));
    html.children.emplace_back(std::move(head));
    html.children.emplace_back(Lowering().lower_page(page));
    return html;
}

std::string serialize_xhtml(const Element& html) {
    std::string out(xml::kDeclaration);
    out += "\n<!DOCTYPE html>\n";
    write_html(out, DocNode(html));
    out += '\n';
    return out;
}

std::string page_xhtml(const Page& page, std::string_view language) {
    return serialize_xhtml(to_html5(page, language));
}

PageFeatures page_features(const Page& page) {
    PageFeatures f;
    scan_features(DocNode(page.content), f);
    return f;
}

std::vector<std::string> write_site(const std::vector<Page>& pages, const std::filesystem::path& dest,
                                    std::string_view language) {
    std::error_code ec;
    std::filesystem::create_directories(dest, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dest.string() + ": " + ec.message());
    std::vector<std::string> written;
    for (const Page& p : pages) {
        const std::string bytes = page_xhtml(p, language);
        const auto path = dest / p.path;
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        written.push_back(p.path);
    }
    return written;
}

}  // namespace semtex
