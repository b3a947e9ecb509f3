#include <doctest.h>

#include <random>

#include "semtex/error.hpp"
#include "semtex/zip.hpp"

using namespace semtex;

namespace {

ErrorCode code_of(std::string_view bytes) {
    try {
        zip::read(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("round trip with stored and deflated entries") {
    const std::vector<zip::Entry> entries{{"mimetype", "application/epub+zip", false},
                                          {"a/b.txt", std::string(5000, 'x'), true},
                                          {"empty", "", true}};
    const std::string bytes = zip::write(entries, zip::dos_time("2024-01-01T00:00:00Z"));
    const auto back = zip::read(bytes);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].name == entries[i].name);
        CHECK(back[i].data == entries[i].data);
        CHECK(back[i].extra_length == 0);
    }
    CHECK(back[0].method == 0);
    CHECK(back[1].method == 8);
    CHECK(back[0].offset == 0);
    CHECK(bytes.substr(30, 8) == "mimetype");
    CHECK(bytes.size() < 5000);
}

TEST_CASE("property: random archives round trip") {
    std::mt19937 rng(9);
    for (int n = 0; n < 100; ++n) {
        std::vector<zip::Entry> entries;
        const int k = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < k; ++i) {
            std::string data(rng() % 3000, '\0');
            for (char& c : data) c = static_cast<char>(rng() % (rng() % 2 ? 4 : 256));
            entries.push_back({"f" + std::to_string(i), data, rng() % 2 == 0});
        }
        const std::string bytes = zip::write(entries, {});
        CHECK(bytes == zip::write(entries, {}));
        const auto back = zip::read(bytes);
        REQUIRE(back.size() == entries.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back[i].data == entries[i].data);
            CHECK(back[i].method == (entries[i].deflate ? 8 : 0));
        }
    }
}

TEST_CASE("dos_time") {
    const auto t = zip::dos_time("2024-01-01T00:00:00Z");
    CHECK(t.date == ((2024 - 1980) << 9 | 1 << 5 | 1));
    CHECK(t.time == 0);
    const auto u = zip::dos_time("2001-02-03T04:05:06Z");
    CHECK(u.date == ((21 << 9) | (2 << 5) | 3));
    CHECK(u.time == ((4 << 11) | (5 << 5) | 3));
    CHECK(zip::dos_time("1970-01-01T00:00:00Z").date == zip::DosTime{}.date);
}

TEST_CASE("NotAZip") {
    CHECK(code_of("") == ErrorCode::NotAZip);
    CHECK(code_of("hello, this is not an archive at all") == ErrorCode::NotAZip);
    std::string bytes = zip::write({{"a", "some data here", false}}, {});
    std::string corrupt = bytes;
    corrupt[32] ^= 1;  // inside the stored data
    CHECK(code_of(corrupt) == ErrorCode::NotAZip);
    CHECK(code_of(bytes.substr(0, bytes.size() - 4)) == ErrorCode::NotAZip);
}
