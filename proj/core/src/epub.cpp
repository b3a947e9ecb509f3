#include "semtex/epub.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "semtex/xml.hpp"
#include "semtex/zip.hpp"

namespace semtex {

namespace {

constexpr std::string_view kMimetype = "application/epub+zip";
constexpr std::string_view kContainerPath = "META-INF/container.xml";
constexpr std::string_view kOpfPath = "OEBPS/content.opf";
constexpr std::string_view kContentDir = "OEBPS/";
constexpr std::string_view kNavHref = "nav.xhtml";
constexpr std::string_view kOpfNamespace = "http://www.idpf.org/2007/opf";
constexpr std::string_view kContainerNamespace = "urn:oasis:names:tc:opendocument:xmlns:container";
constexpr std::string_view kOpsNamespace = "http://www.idpf.org/2007/ops";
constexpr std::string_view kXhtmlType = "application/xhtml+xml";

bool timestamp_ok(const std::string& s) {
    static const std::regex re(R"(\d{4}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01])T([01]\d|2[0-3]):[0-5]\d:[0-5]\dZ)");
    return std::regex_match(s, re);
}

bool href_ok(const std::string& href) {
    if (href.empty() || href.front() == '/' || href.find(':') != std::string::npos) return false;
    std::size_t start = 0;
    while (start <= href.size()) {
        const std::size_t end = std::min(href.find('/', start), href.size());
        const std::string_view seg(href.data() + start, end - start);
        if (seg.empty() || seg == "." || seg == "..") return false;
        start = end + 1;
    }
    return true;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

std::string document_bytes(const Element& root) {
    std::string out(xml::kDeclaration);
    out += '\n';
    xml::write(out, DocNode(root));
    out += '\n';
    return out;
}

Element text_element(std::string name, std::vector<Attribute> attrs, std::string text) {
    return Element(std::move(name), std::move(attrs), {DocNode::text(std::move(text))});
}

Element toc_ol(const std::vector<TocEntry>& entries) {
    Element ol("ol");
    for (const auto& e : entries) {
        Element li("li", {}, {DocNode(text_element("a", {{"href", e.href}}, e.title))});
        if (!e.children.empty()) li.children.emplace_back(toc_ol(e.children));
        ol.children.emplace_back(std::move(li));
    }
    return ol;
}

// --- parsed-tree helpers for validation ----------------------------------

const Element* child(const Element& e, std::string_view name) {
    for (const auto& c : e.children) {
        if (c.is_element(name)) return &c.element();
    }
    return nullptr;
}

void descendants(const Element& e, std::string_view name, std::vector<const Element*>& out) {
    for (const auto& c : e.children) {
        if (!c.is_element()) continue;
        if (c.element().name == name) out.push_back(&c.element());
        descendants(c.element(), name, out);
    }
}

std::vector<const Element*> descendants(const Element& e, std::string_view name) {
    std::vector<const Element*> out;
    descendants(e, name, out);
    return out;
}

std::string attr_or(const Element& e, std::string_view key) {
    const std::string* v = e.attr(key);
    return v ? *v : std::string();
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        const std::size_t j = std::min(s.find(' ', i), s.size());
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string dirname(std::string_view path) {
    const std::size_t slash = path.rfind('/');
    return slash == std::string_view::npos ? std::string() : std::string(path.substr(0, slash + 1));
}

class Validator {
public:
    explicit Validator(std::string_view archive) : entries_(zip::read(archive)) {
        for (const auto& e : entries_) files_.emplace(e.name, &e);
    }

    std::vector<StructureViolation> run() {
        check_mimetype();
        check_container();
        check_opf();
        return std::move(out_);
    }

private:
    void fail(const std::string& rule, std::string detail) { out_.push_back({rule, std::move(detail)}); }

    const zip::ReadEntry* file(const std::string& name) const {
        auto it = files_.find(name);
        return it == files_.end() ? nullptr : it->second;
    }

    void check_mimetype() {
        if (entries_.empty() || entries_.front().name != "mimetype" || entries_.front().offset != 0) {
            fail("mimetype-first", "the first entry is not 'mimetype'");
        }
        const zip::ReadEntry* m = file("mimetype");
        if (!m) return;
        if (m->method != 0 || m->extra_length != 0) {
            fail("mimetype-stored", "'mimetype' is compressed or has an extra field");
        }
        if (m->data != kMimetype) fail("mimetype-content-exact", "'mimetype' does not hold exactly application/epub+zip");
    }

    void check_container() {
        const zip::ReadEntry* c = file(std::string(kContainerPath));
        const char* rule = "container-present-and-points-to-opf";
        if (!c) {
            fail(rule, "META-INF/container.xml is missing");
            return;
        }
        std::string err;
        auto root = xml::parse(c->data, &err);
        if (!root || root->name != "container" || attr_or(*root, "xmlns") != kContainerNamespace) {
            fail(rule, "container.xml is not a container document" + (err.empty() ? "" : ": " + err));
            return;
        }
        for (const Element* rf : descendants(*root, "rootfile")) {
            if (attr_or(*rf, "media-type") == "application/oebps-package+xml") {
                opf_path_ = attr_or(*rf, "full-path");
                break;
            }
        }
        if (opf_path_.empty() || !file(opf_path_)) {
            fail(rule, "no rootfile names an existing package document");
            opf_path_.clear();
        }
    }

    void check_opf() {
        if (opf_path_.empty()) return;
        std::string err;
        auto pkg = xml::parse(file(opf_path_)->data, &err);
        if (!pkg || pkg->name != "package" || attr_or(*pkg, "xmlns") != kOpfNamespace) {
            fail("opf-parses", err.empty() ? "root is not an OPF package" : err);
            return;
        }
        const std::string base = dirname(opf_path_);
        const Element* manifest = child(*pkg, "manifest");
        const Element* spine = child(*pkg, "spine");
        const Element* metadata = child(*pkg, "metadata");
        if (!manifest || !spine || !metadata) {
            fail("opf-parses", "package lacks metadata, manifest or spine");
            return;
        }

        std::map<std::string, const Element*> items;
        std::set<std::string> listed;
        std::vector<std::string> duplicate_ids;
        for (const Element* item : descendants(*manifest, "item")) {
            const std::string id = attr_or(*item, "id");
            if (!items.emplace(id, item).second) duplicate_ids.push_back(id);
            listed.insert(base + attr_or(*item, "href"));
        }

        for (const auto& path : listed) {
            if (!file(path)) fail("all-manifest-hrefs-exist-in-zip", path + " is not in the archive");
        }
        for (const auto& e : entries_) {
            if (e.name == "mimetype" || e.name.starts_with("META-INF/") || e.name == opf_path_) continue;
            if (!listed.contains(e.name)) fail("all-zip-content-files-in-manifest", e.name + " is not in the manifest");
        }

        const auto refs = descendants(*spine, "itemref");
        if (refs.empty()) fail("spine-idrefs-resolve", "the spine is empty");
        for (const Element* r : refs) {
            const std::string idref = attr_or(*r, "idref");
            auto it = items.find(idref);
            if (it == items.end()) {
                fail("spine-idrefs-resolve", "itemref '" + idref + "' names no manifest item");
            } else if (attr_or(*it->second, "media-type") != kXhtmlType) {
                fail("spine-idrefs-resolve", "itemref '" + idref + "' is not an XHTML document");
            }
        }

        std::set<std::string> ids;
        for (const auto& id : duplicate_ids) fail("unique-ids", "duplicate id '" + id + "'");
        for (const auto& [id, item] : items) ids.insert(id);
        for (const Element* e : descendants(*metadata, "dc:identifier")) {
            const std::string* id = e->attr("id");
            if (id && !ids.insert(*id).second) fail("unique-ids", "duplicate id '" + *id + "'");
        }

        check_nav(items, base);
        check_modified(*metadata);
        check_pages(items, base);
    }

    void check_nav(const std::map<std::string, const Element*>& items, const std::string& base) {
        std::vector<const Element*> navs;
        for (const auto& [id, item] : items) {
            const auto props = split_words(attr_or(*item, "properties"));
            if (std::find(props.begin(), props.end(), "nav") != props.end()) navs.push_back(item);
        }
        if (navs.size() != 1) {
            fail("nav-present", std::to_string(navs.size()) + " manifest items carry the nav property");
            return;
        }
        const zip::ReadEntry* f = file(base + attr_or(*navs.front(), "href"));
        auto doc = f ? xml::parse(f->data) : std::nullopt;
        bool toc = false;
        if (doc) {
            for (const Element* n : descendants(*doc, "nav")) toc = toc || attr_or(*n, "epub:type") == "toc";
        }
        if (!toc) fail("nav-present", "the navigation document has no <nav epub:type=\"toc\">");
    }

    void check_modified(const Element& metadata) {
        std::vector<std::string> values;
        for (const Element* m : descendants(metadata, "meta")) {
            if (attr_or(*m, "property") == "dcterms:modified") values.push_back(text_content(DocNode(*m)));
        }
        if (values.size() != 1) {
            fail("modified-timestamp-format", "expected one dcterms:modified, found " + std::to_string(values.size()));
        } else if (!timestamp_ok(values.front())) {
            fail("modified-timestamp-format", "'" + values.front() + "' is not CCYY-MM-DDThh:mm:ssZ");
        }
    }

    void check_pages(const std::map<std::string, const Element*>& items, const std::string& base) {
        for (const auto& [id, item] : items) {
            const std::string type = attr_or(*item, "media-type");
            if (type != kXhtmlType && type != "image/svg+xml") continue;
            const zip::ReadEntry* f = file(base + attr_or(*item, "href"));
            if (!f) continue;
            std::string err;
            if (!xml::parse(f->data, &err)) fail("pages-well-formed-xml", f->name + ": " + err);
        }
    }

    std::vector<zip::ReadEntry> entries_;
    std::map<std::string, const zip::ReadEntry*> files_;
    std::string opf_path_;
    std::vector<StructureViolation> out_;
};

}  // namespace

void validate_metadata(const EpubMetadata& meta) {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::MetadataInvalid, what); };
    if (meta.identifier.empty()) bad("identifier is empty");
    if (meta.title.empty()) bad("title is empty");
    if (meta.language.empty()) bad("language is empty");
    static const std::regex lang(R"([A-Za-z]{2,8}(-[A-Za-z0-9]{1,8})*)");
    if (!std::regex_match(meta.language, lang)) bad("language '" + meta.language + "' is not a BCP-47 tag");
    if (!timestamp_ok(meta.modified)) bad("modified '" + meta.modified + "' is not CCYY-MM-DDThh:mm:ssZ");
}

std::string format_timestamp(std::time_t t) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<ManifestItem> build_manifest(const std::vector<Page>& pages, const std::vector<Resource>& resources) {
    std::vector<ManifestItem> items;
    items.push_back({"nav", std::string(kNavHref), std::string(kXhtmlType), {"nav"}});
    for (const Page& p : pages) {
        ManifestItem item{"page-" + p.id, p.path, std::string(kXhtmlType), {}};
        const PageFeatures f = page_features(p);
        if (f.math) item.properties.push_back("mathml");
        if (f.svg) item.properties.push_back("svg");
        items.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < resources.size(); ++i) {
        items.push_back({"res-" + std::to_string(i + 1), resources[i].href, resources[i].media_type, {}});
    }
    std::set<std::string> ids;
    std::set<std::string> hrefs;
    for (const auto& item : items) {
        if (!href_ok(item.href)) throw Error(ErrorCode::ManifestCollision, "href '" + item.href + "' is not relative");
        if (!ids.insert(item.id).second) throw Error(ErrorCode::ManifestCollision, "duplicate id '" + item.id + "'");
        if (!hrefs.insert(item.href).second) {
            throw Error(ErrorCode::ManifestCollision, "duplicate href '" + item.href + "'");
        }
    }
    return items;
}

Element make_nav(const std::vector<Page>& pages, std::string_view language) {
    const std::string lang(language);
    Element html("html", {{"xmlns", std::string(xml::kXhtmlNamespace)},
                          {"xmlns:epub", std::string(kOpsNamespace)},
                          {"lang", lang},
                          {"xml:lang", lang}});
    Element head("head", {}, {DocNode(Element("meta", {{"charset", "utf-8"}})), DocNode(text_element("title", {}, "Contents"))});
    Element nav("nav", {{"epub:type", "toc"}, {"id", "toc"}});
    nav.children.emplace_back(text_element("h1", {}, "Contents"));
    nav.children.emplace_back(toc_ol(make_toc(pages)));
    html.children.emplace_back(std::move(head));
    html.children.emplace_back(Element("body", {}, {DocNode(std::move(nav))}));
    return html;
}

std::string build_package(const std::vector<Page>& pages, const std::vector<Resource>& resources,
                          const EpubMetadata& meta) {
    validate_metadata(meta);
    if (pages.empty()) throw Error(ErrorCode::ManifestCollision, "no pages to package");
    const auto items = build_manifest(pages, resources);

    Element metadata("metadata", {{"xmlns:dc", "http://purl.org/dc/elements/1.1/"}});
    metadata.children.emplace_back(text_element("dc:identifier", {{"id", "bookid"}}, meta.identifier));
    metadata.children.emplace_back(text_element("dc:title", {}, meta.title));
    metadata.children.emplace_back(text_element("dc:language", {}, meta.language));
    metadata.children.emplace_back(text_element("meta", {{"property", "dcterms:modified"}}, meta.modified));

    Element manifest("manifest");
    for (const auto& item : items) {
        Element e("item", {{"id", item.id}, {"href", item.href}, {"media-type", item.media_type}});
        if (!item.properties.empty()) e.set_attr("properties", join(item.properties));
        manifest.children.emplace_back(std::move(e));
    }
    Element spine("spine");
    for (const Page& p : pages) spine.children.emplace_back(Element("itemref", {{"idref", "page-" + p.id}}));

    Element package("package", {{"xmlns", std::string(kOpfNamespace)},
                                {"version", "3.0"},
                                {"unique-identifier", "bookid"},
                                {"xml:lang", meta.language}});
    package.children.emplace_back(std::move(metadata));
    package.children.emplace_back(std::move(manifest));
    package.children.emplace_back(std::move(spine));

    Element container("container", {{"version", "1.0"}, {"xmlns", std::string(kContainerNamespace)}});
    container.children.emplace_back(Element(
        "rootfiles", {},
        {DocNode(Element("rootfile", {{"full-path", std::string(kOpfPath)}, {"media-type", "application/oebps-package+xml"}}))}));

    const std::string content_dir(kContentDir);
    std::vector<zip::Entry> entries;
    entries.push_back({"mimetype", std::string(kMimetype), false});
    entries.push_back({std::string(kContainerPath), document_bytes(container)});
    entries.push_back({std::string(kOpfPath), document_bytes(package)});
    entries.push_back({content_dir + std::string(kNavHref), serialize_xhtml(make_nav(pages, meta.language))});
    for (const Page& p : pages) entries.push_back({content_dir + p.path, page_xhtml(p, meta.language)});
    for (const Resource& r : resources) entries.push_back({content_dir + r.href, r.data});
    return zip::write(entries, zip::dos_time(meta.modified));
}

std::vector<StructureViolation> validate_structure(std::string_view archive) { return Validator(archive).run(); }

const std::vector<std::string>& structure_rules() {
    static const std::vector<std::string> rules{
        "mimetype-first",
        "mimetype-stored",
        "mimetype-content-exact",
        "container-present-and-points-to-opf",
        "opf-parses",
        "all-manifest-hrefs-exist-in-zip",
        "all-zip-content-files-in-manifest",
        "spine-idrefs-resolve",
        "unique-ids",
        "nav-present",
        "modified-timestamp-format",
        "pages-well-formed-xml",
    };
    return rules;
}

}  // namespace semtex
