#pragma once

// Little-endian primitive encoding shared by the AGTR/AGEC/AGFT file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "airguard/common.hpp"

namespace airguard::io {

class ByteWriter {
public:
    void put_magic(std::string_view magic) { bytes_.insert(bytes_.end(), magic.begin(), magic.end()); }

    template <typename UInt>
    void put_uint(UInt value) {
        for (std::size_t i = 0; i < sizeof(UInt); ++i) {
            bytes_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
        }
    }

    void put_i32(std::int32_t v) { put_uint(static_cast<std::uint32_t>(v)); }
    void put_f32(float v) { put_uint(std::bit_cast<std::uint32_t>(v)); }
    void put_f64(double v) { put_uint(std::bit_cast<std::uint64_t>(v)); }

    [[nodiscard]] const std::vector<char>& bytes() const noexcept { return bytes_; }

    void write_file(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + path);
        out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
        if (!out) throw IoError("write failed: " + path);
    }

private:
    std::vector<char> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

    static ByteReader from_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open for reading: " + path);
        std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return ByteReader(std::move(data));
    }

    void expect_magic(std::string_view magic) {
        need(magic.size());
        if (std::string_view(bytes_.data() + pos_, magic.size()) != magic) {
            throw ParseError("bad magic, expected " + std::string(magic));
        }
        pos_ += magic.size();
    }

    template <typename UInt>
    UInt get_uint() {
        need(sizeof(UInt));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(UInt); ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(UInt);
        return static_cast<UInt>(v);
    }

    std::int32_t get_i32() { return static_cast<std::int32_t>(get_uint<std::uint32_t>()); }
    float get_f32() { return std::bit_cast<float>(get_uint<std::uint32_t>()); }
    double get_f64() { return std::bit_cast<double>(get_uint<std::uint64_t>()); }

    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw ParseError("unexpected end of file");
    }

    std::vector<char> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace airguard::io
