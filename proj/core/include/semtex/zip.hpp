// zip.hpp - minimal deterministic PKZIP 2.0 writer and reader
//
// Only the stored and deflate methods, no extra fields, no data descriptors,
// no zip64. Every entry carries the same DOS timestamp.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace semtex::zip {

struct DosTime {
    std::uint16_t time = 0;
    std::uint16_t date = (1 << 5) | 1;  // 1980-01-01
};

// From "CCYY-MM-DDThh:mm:ssZ"; years before 1980 clamp to the DOS epoch.
DosTime dos_time(std::string_view timestamp);

struct Entry {
    std::string name;
    std::string data;
    bool deflate = true;
};

std::string write(const std::vector<Entry>& entries, DosTime when);

struct ReadEntry {
    std::string name;
    std::string data;  // uncompressed
    std::uint16_t method = 0;
    std::uint16_t extra_length = 0;  // local header extra field
    std::uint32_t offset = 0;        // of the local header
};

// Entries in archive order. Throws NotAZip on anything it cannot read.
std::vector<ReadEntry> read(std::string_view bytes);

}  // namespace semtex::zip
