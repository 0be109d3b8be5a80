#pragma once

#include <cstdint>
#include <string>

#include "snls/field.hpp"

namespace snls {

inline constexpr std::uint16_t kSnapshotVersion = 1;

struct Snapshot {
    Field field;
    double eps = 0.0;
    double t = 0.0;
};

// "SNLS" | u16 version | u8 dim | u32 N per axis | f64 L per axis | f64 eps | f64 t | (re, im) f64 ...
std::string encode_snapshot(const Field& f, double eps, double t, const char magic[4] = "SNLS");
Snapshot decode_snapshot(const std::string& bytes, const char magic[4] = "SNLS");

void write_snapshot(const std::string& path, const Field& f, double eps, double t);
Snapshot read_snapshot(const std::string& path);

// write to path.tmp.<unique> then rename over path
void atomic_write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

// little-endian primitives shared with the Wigner binary format
void put_u8(std::string& out, std::uint8_t v);
void put_u16(std::string& out, std::uint16_t v);
void put_u32(std::string& out, std::uint32_t v);
void put_f64(std::string& out, double v);

class ByteReader {
public:
    explicit ByteReader(const std::string& b) : b_(b) {}
    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    double f64();
    void magic(const char m[4]);
    bool done() const { return pos_ == b_.size(); }

private:
    const std::string& b_;
    std::size_t pos_ = 0;
    void need(std::size_t n);
};

}  // namespace snls
