#include "semtex/zip.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>

#include "semtex/error.hpp"

namespace semtex::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;

void put16(std::string& out, std::uint16_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>(v >> 8);
}

void put32(std::string& out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v & 0xffff));
    put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::string deflate_raw(const std::string& data) {
    z_stream zs{};
    if (deflateInit2(&zs, 9, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw Error(ErrorCode::IoError, "deflateInit2 failed");
    }
    std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(ErrorCode::IoError, "deflate failed");
    return out;
}

std::uint32_t crc(const std::string& data) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

class Cursor {
public:
    explicit Cursor(std::string_view b) : b_(b) {}

    void seek(std::size_t at) {
        if (at > b_.size()) fail("offset out of range");
        pos_ = at;
    }
    std::uint16_t u16() {
        need(2);
        const auto v = static_cast<std::uint16_t>(byte(pos_) | (byte(pos_ + 1) << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        const std::uint32_t lo = u16();
        return lo | (static_cast<std::uint32_t>(u16()) << 16);
    }
    std::string_view take(std::size_t n) {
        need(n);
        auto s = b_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t pos() const { return pos_; }

    [[noreturn]] static void fail(const std::string& why) { throw Error(ErrorCode::NotAZip, why); }

private:
    unsigned byte(std::size_t i) const { return static_cast<unsigned char>(b_[i]); }
    void need(std::size_t n) const {
        if (b_.size() - pos_ < n) fail("truncated archive");
    }

    std::string_view b_;
    std::size_t pos_ = 0;
};

std::string inflate_raw(std::string_view data, std::size_t size) {
    std::string out(size, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) Cursor::fail("inflateInit2 failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const auto produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != size) Cursor::fail("corrupt deflate stream");
    return out;
}

}  // namespace

DosTime dos_time(std::string_view timestamp) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    const std::string t(timestamp);
    if (std::sscanf(t.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d", &y, &mo, &d, &h, &mi, &s) != 6 || y < 1980) return {};
    DosTime dt;
    dt.time = static_cast<std::uint16_t>((h << 11) | (mi << 5) | (s / 2));
    dt.date = static_cast<std::uint16_t>(((std::min(y, 2107) - 1980) << 9) | (mo << 5) | d);
    return dt;
}

std::string write(const std::vector<Entry>& entries, DosTime when) {
    std::string out;
    std::string central;
    for (const Entry& e : entries) {
        const std::string body = e.deflate ? deflate_raw(e.data) : e.data;
        const std::uint16_t method = e.deflate ? 8 : 0;
        const std::uint32_t sum = crc(e.data);
        const auto offset = static_cast<std::uint32_t>(out.size());

        put32(out, kLocalSig);
        put16(out, 20);  // version needed
        put16(out, 0);   // flags
        put16(out, method);
        put16(out, when.time);
        put16(out, when.date);
        put32(out, sum);
        put32(out, static_cast<std::uint32_t>(body.size()));
        put32(out, static_cast<std::uint32_t>(e.data.size()));
        put16(out, static_cast<std::uint16_t>(e.name.size()));
        put16(out, 0);  // extra length
        out += e.name;
        out += body;

        put32(central, kCentralSig);
        put16(central, 20);  // version made by: MS-DOS, 2.0
        put16(central, 20);
        put16(central, 0);
        put16(central, method);
        put16(central, when.time);
        put16(central, when.date);
        put32(central, sum);
        put32(central, static_cast<std::uint32_t>(body.size()));
        put32(central, static_cast<std::uint32_t>(e.data.size()));
        put16(central, static_cast<std::uint16_t>(e.name.size()));
        put16(central, 0);  // extra
        put16(central, 0);  // comment
        put16(central, 0);  // disk
        put16(central, 0);  // internal attributes
        put32(central, 0);  // external attributes
        put32(central, offset);
        central += e.name;
    }
    const auto central_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put32(out, kEndSig);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(entries.size()));
    put16(out, static_cast<std::uint16_t>(entries.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, central_offset);
    put16(out, 0);
    return out;
}

std::vector<ReadEntry> read(std::string_view bytes) {
    if (bytes.size() < 22) Cursor::fail("too short for a zip archive");
    std::size_t end = std::string_view::npos;
    const std::size_t lowest = bytes.size() >= 22 + 0xffff ? bytes.size() - 22 - 0xffff : 0;
    for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
        if (bytes.compare(i, 4, "PK\x05\x06") == 0) {
            end = i;
            break;
        }
    }
    if (end == std::string_view::npos) Cursor::fail("no end of central directory record");

    Cursor c(bytes);
    c.seek(end + 10);
    const std::uint16_t count = c.u16();
    c.u32();  // central directory size
    c.seek(c.u32());

    std::vector<ReadEntry> out;
    std::vector<std::uint32_t> sums;
    std::vector<std::uint32_t> csizes;
    std::vector<std::uint32_t> usizes;
    for (int i = 0; i < count; ++i) {
        if (c.u32() != kCentralSig) Cursor::fail("bad central directory signature");
        c.u16();
        c.u16();
        const std::uint16_t flags = c.u16();
        ReadEntry e;
        e.method = c.u16();
        c.u16();
        c.u16();
        sums.push_back(c.u32());
        csizes.push_back(c.u32());
        usizes.push_back(c.u32());
        const std::uint16_t name_len = c.u16();
        const std::uint16_t extra_len = c.u16();
        const std::uint16_t comment_len = c.u16();
        c.take(8);
        e.offset = c.u32();
        e.name = std::string(c.take(name_len));
        c.take(static_cast<std::size_t>(extra_len) + comment_len);
        if (flags & 1) Cursor::fail("encrypted entry '" + e.name + "'");
        out.push_back(std::move(e));
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        ReadEntry& e = out[i];
        c.seek(e.offset);
        if (c.u32() != kLocalSig) Cursor::fail("bad local header for '" + e.name + "'");
        c.take(22);
        const std::uint16_t name_len = c.u16();
        e.extra_length = c.u16();
        c.take(static_cast<std::size_t>(name_len) + e.extra_length);
        const std::string_view body = c.take(csizes[i]);
        if (e.method == 0) {
            e.data = std::string(body);
        } else if (e.method == 8) {
            e.data = inflate_raw(body, usizes[i]);
        } else {
            Cursor::fail("unsupported compression method " + std::to_string(e.method));
        }
        if (crc(e.data) != sums[i]) Cursor::fail("CRC mismatch for '" + e.name + "'");
    }
    std::stable_sort(out.begin(), out.end(), [](const ReadEntry& a, const ReadEntry& b) { return a.offset < b.offset; });
    return out;
}

}  // namespace semtex::zip
