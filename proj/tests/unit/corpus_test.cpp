#include <doctest.h>

#include <cstdlib>

#include "semtex/postprocess.hpp"
#include "semtex/schema.hpp"
#include "semtex/xml.hpp"
#include "test_support.hpp"

using namespace semtex;

// Set SEMTEX_UPDATE_GOLDEN=1 to rewrite the golden files after reviewing a
// deliberate output change.
TEST_CASE("corpus documents match their golden XML") {
    const bool update = std::getenv("SEMTEX_UPDATE_GOLDEN") != nullptr;
    const auto files = test::corpus_files();
    CHECK(files.size() >= 5);
    for (const auto& path : files) {
        INFO(path);
        const Document doc = resolve_refs(test::convert_std(test::read_file(path)));
        CHECK_FALSE(has_warnings(doc.diagnostics));
        CHECK(schema::validate(doc).empty());
        const std::string bytes = serialize_xml(doc) + "\n";
        const auto golden = test::golden_dir() / (path.stem().string() + ".xml");
        if (update) test::write_file(golden, bytes);
        REQUIRE(std::filesystem::exists(golden));
        CHECK(bytes == test::read_file(golden));
    }
}

TEST_CASE("every artifact over the corpus re-parses with an independent parser") {
    std::size_t checked = 0;
    for (const auto& path : test::corpus_files()) {
        for (const auto& [name, bytes] : test::artifacts_for(test::read_file(path))) {
            INFO(path.filename().string() << " " << name);
            CHECK(test::well_formedness_error(bytes) == "");
            ++checked;
        }
    }
    CHECK(checked > 30);
}
