// epub.hpp - EPUB 3.0 packaging and structural self-validation
#pragma once

#include <ctime>
#include <string>
#include <string_view>
#include <vector>

#include "semtex/postprocess.hpp"

namespace semtex {

struct EpubMetadata {
    std::string identifier;
    std::string title;
    std::string language;
    std::string modified;  // CCYY-MM-DDThh:mm:ssZ
};

// Throws MetadataInvalid.
void validate_metadata(const EpubMetadata& meta);

// UTC, in the `modified` format.
std::string format_timestamp(std::time_t t);

struct ManifestItem {
    std::string id;
    std::string href;  // relative to the package document
    std::string media_type;
    std::vector<std::string> properties;  // nav, mathml, svg, scripted
};

// Extra files shipped next to the pages (images, stylesheets).
struct Resource {
    std::string href;
    std::string media_type;
    std::string data;
};

// Manifest in archive order: nav, pages, resources. Throws ManifestCollision
// on duplicate or non-relative hrefs.
std::vector<ManifestItem> build_manifest(const std::vector<Page>& pages, const std::vector<Resource>& resources);

// XHTML navigation document with <nav epub:type="toc">.
Element make_nav(const std::vector<Page>& pages, std::string_view language = "en");

std::string build_package(const std::vector<Page>& pages, const std::vector<Resource>& resources,
                          const EpubMetadata& meta);

struct StructureViolation {
    std::string rule;
    std::string detail;
};

// Empty when the archive passes every rule. Throws NotAZip.
std::vector<StructureViolation> validate_structure(std::string_view archive);

// Names of all rules validate_structure checks, in check order.
const std::vector<std::string>& structure_rules();

}  // namespace semtex
