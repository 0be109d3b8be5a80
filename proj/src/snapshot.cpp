#include "snls/snapshot.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace snls {

namespace {
template <class T>
void put_le(std::string& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}
}  // namespace

void put_u8(std::string& out, std::uint8_t v) { put_le(out, v); }
void put_u16(std::string& out, std::uint16_t v) { put_le(out, v); }
void put_u32(std::string& out, std::uint32_t v) { put_le(out, v); }
void put_f64(std::string& out, double v) { put_le(out, v); }

void ByteReader::need(std::size_t n) {
    if (pos_ + n > b_.size()) throw Error("binary read: truncated input");
}

template <class T>
static T get_le(const std::string& b, std::size_t& pos) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, b.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    pos += sizeof(T);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::uint8_t ByteReader::u8() { need(1); return get_le<std::uint8_t>(b_, pos_); }
std::uint16_t ByteReader::u16() { need(2); return get_le<std::uint16_t>(b_, pos_); }
std::uint32_t ByteReader::u32() { need(4); return get_le<std::uint32_t>(b_, pos_); }
double ByteReader::f64() { need(8); return get_le<double>(b_, pos_); }

void ByteReader::magic(const char m[4]) {
    need(4);
    if (std::memcmp(b_.data() + pos_, m, 4) != 0) throw Error(std::string("binary read: bad magic, expected ") + std::string(m, 4));
    pos_ += 4;
}

std::string encode_snapshot(const Field& f, double eps, double t, const char magic[4]) {
    f.require(Space::physical, "encode_snapshot");
    const Grid& g = f.grid();
    std::string out;
    out.reserve(64 + 16 * f.size());
    out.append(magic, 4);
    put_u16(out, kSnapshotVersion);
    put_u8(out, static_cast<std::uint8_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) put_u32(out, static_cast<std::uint32_t>(g.points(a)));
    for (int a = 0; a < g.dim(); ++a) put_f64(out, g.extent(a));
    put_f64(out, eps);
    put_f64(out, t);
    for (const auto& z : f.values()) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
    return out;
}

Snapshot decode_snapshot(const std::string& bytes, const char magic[4]) {
    ByteReader r(bytes);
    r.magic(magic);
    const auto ver = r.u16();
    if (ver != kSnapshotVersion) throw Error("snapshot: unsupported version " + std::to_string(ver));
    const int dim = r.u8();
    if (dim != 1 && dim != 2) throw Error("snapshot: bad dimension");
    std::vector<std::size_t> N(dim);
    std::vector<double> L(dim);
    for (int a = 0; a < dim; ++a) N[a] = r.u32();
    for (int a = 0; a < dim; ++a) L[a] = r.f64();
    Snapshot s;
    s.eps = r.f64();
    s.t = r.f64();
    auto g = make_grid(dim, L, N);
    cvec v(g->size());
    for (auto& z : v) {
        const double re = r.f64();
        const double im = r.f64();
        z = {re, im};
    }
    if (!r.done()) throw Error("snapshot: trailing bytes");
    s.field = Field(g, std::move(v));
    return s;
}

void write_snapshot(const std::string& path, const Field& f, double eps, double t) {
    atomic_write_file(path, encode_snapshot(f, eps, t));
}

Snapshot read_snapshot(const std::string& path) { return decode_snapshot(read_file(path)); }

void atomic_write_file(const std::string& path, const std::string& bytes) {
    static std::atomic<unsigned long> counter{0};
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ostringstream tmpname;
    tmpname << path << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
    {
        std::ofstream os(tmpname.str(), std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmpname.str() + " for writing");
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!os) throw Error("write failed: " + tmpname.str());
    }
    fs::rename(tmpname.str(), target);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace snls
