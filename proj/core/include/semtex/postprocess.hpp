// postprocess.hpp - cross-references, page splitting and HTML5 lowering
//
// Pages are plain copies of document subtrees: the index page keeps the root
// minus its top-level sections, and each top-level section becomes a page of
// its own when splitting at sections. HTML output is polyglot XHTML so the
// same bytes serve standalone HTML5 and EPUB content documents.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "semtex/doc.hpp"

namespace semtex {

enum class SplitLevel { None, Section };

// "none" or "section"; throws InvalidArgument otherwise.
SplitLevel parse_split_level(std::string_view text);

struct TocEntry {
    std::string title;
    std::string href;
    std::vector<TocEntry> children;
};

struct Page {
    std::string id;     // "index" or the section's xml:id
    std::string title;  // plain text
    Element content;    // `document` (index page) or `section`
    std::string path;   // relative output path
    std::vector<std::string> nav_children;  // ids of pages below this one
    // Table of contents rendered on the index page of a split document.
    std::vector<TocEntry> toc;
};

// Output path of the page holding each xml:id under the given split.
std::string page_path_for(const Document& doc, SplitLevel level, std::string_view id);

// Sets href on every ref whose label is known ("#id" on the same page,
// "path#id" across pages), fills empty refs with the target's title or the
// label key, and marks unknown labels with class="undefined" plus a warning
// in doc.diagnostics.
Document resolve_refs(Document doc, SplitLevel level = SplitLevel::None);

std::vector<Page> split_pages(const Document& doc, SplitLevel level);

// Nested entries for every section on every page, in document order.
std::vector<TocEntry> make_toc(const std::vector<Page>& pages);

// <html> tree for a page. Throws UnmappedElement for elements outside the
// vocabulary.
Element to_html5(const Page& page, std::string_view language = "en");

// XML declaration, doctype and the tree. Void HTML elements are written
// self-closed, every other empty element with an explicit end tag.
std::string serialize_xhtml(const Element& html);

// Convenience: serialize_xhtml(to_html5(page)).
std::string page_xhtml(const Page& page, std::string_view language = "en");

struct PageFeatures {
    bool math = false;
    bool svg = false;
};
PageFeatures page_features(const Page& page);

// Writes one file per page under `dest` (created if needed) and returns the
// relative paths written. Throws IoError.
std::vector<std::string> write_site(const std::vector<Page>& pages, const std::filesystem::path& dest,
                                    std::string_view language = "en");

}  // namespace semtex
