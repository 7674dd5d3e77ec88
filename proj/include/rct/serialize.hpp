#pragma once

#include <rct/common.hpp>

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace rct {

/// Little-endian binary writer. Counts the bytes it emits.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : m_out(out) {}

    void u8(std::uint8_t v) {
        m_out.put(static_cast<char>(v));
        ++m_bytes;
    }

    void u16(std::uint16_t v) { fixed(v, 2); }
    void u32(std::uint32_t v) { fixed(v, 4); }
    void u64(std::uint64_t v) { fixed(v, 8); }
    void i64(std::int64_t v) { fixed(static_cast<std::uint64_t>(v), 8); }

    /// LEB128
    void varint(std::uint64_t v) {
        while (v >= 0x80) {
            u8(static_cast<std::uint8_t>(v | 0x80));
            v >>= 7;
        }
        u8(static_cast<std::uint8_t>(v));
    }

    /// zigzag + LEB128
    void svarint(std::int64_t v) {
        varint((static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63));
    }

    void bytes(const std::string& s) {
        m_out.write(s.data(), static_cast<std::streamsize>(s.size()));
        m_bytes += s.size();
    }

    std::uint64_t written() const { return m_bytes; }

private:
    void fixed(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            u8(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    std::ostream& m_out;
    std::uint64_t m_bytes = 0;
};

class BinaryReader {
public:
    explicit BinaryReader(std::istream& in) : m_in(in) {}

    std::uint8_t u8() {
        const auto c = m_in.get();
        if (c == std::char_traits<char>::eof()) {
            throw FormatError("unexpected end of index data");
        }
        return static_cast<std::uint8_t>(c);
    }

    std::uint16_t u16() { return static_cast<std::uint16_t>(fixed(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(fixed(4)); }
    std::uint64_t u64() { return fixed(8); }
    std::int64_t i64() { return static_cast<std::int64_t>(fixed(8)); }

    std::uint64_t varint() {
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            const auto b = u8();
            v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
            if (!(b & 0x80)) {
                return v;
            }
        }
        throw FormatError("malformed varint");
    }

    std::int64_t svarint() {
        const auto z = varint();
        return static_cast<std::int64_t>((z >> 1) ^ (~(z & 1) + 1));
    }

    std::string bytes(std::size_t n) {
        std::string s(n, '\0');
        m_in.read(s.data(), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(m_in.gcount()) != n) {
            throw FormatError("unexpected end of index data");
        }
        return s;
    }

    /// Length prefix for a variable-size array, sanity-bounded so corrupt input fails early.
    std::size_t length(std::uint64_t limit = (1ull << 40)) {
        const auto n = varint();
        if (n > limit) {
            throw FormatError("implausible array length in index data");
        }
        return static_cast<std::size_t>(n);
    }

private:
    std::uint64_t fixed(int n) {
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        }
        return v;
    }

    std::istream& m_in;
};

} // namespace rct
