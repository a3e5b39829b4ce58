#ifndef PPTS_WIRE_HPP
#define PPTS_WIRE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppts/paillier.hpp"

namespace ppts {

// Big-endian, length-prefixed byte encoding for protocol message payloads.
//
//   u32/u64   big-endian fixed width
//   i64       two's complement, big-endian
//   blob      u32 byte length + bytes (used for big integers, magnitude only)

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void blob(const std::vector<std::uint8_t>& b) {
        u32(static_cast<std::uint32_t>(b.size()));
        buf_.insert(buf_.end(), b.begin(), b.end());
    }
    void bigint(const mpz_class& v) { blob(mpz_to_bytes(v)); }

    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}

    std::uint8_t u8() { return buf_.at(pos_++); }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    std::vector<std::uint8_t> blob() {
        std::uint32_t len = u32();
        if (pos_ + len > buf_.size()) throw std::out_of_range("truncated blob");
        std::vector<std::uint8_t> out(buf_.begin() + pos_, buf_.begin() + pos_ + len);
        pos_ += len;
        return out;
    }
    mpz_class bigint() {
        auto b = blob();
        return mpz_from_bytes(b.data(), b.size());
    }
    bool done() const { return pos_ == buf_.size(); }

private:
    const std::vector<std::uint8_t>& buf_;
    std::size_t pos_ = 0;
};

}  // namespace ppts

#endif
