#pragma once

#include <rct/serialize.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rct {

/// Plain bitvector with constant-time rank and select.
///
/// Positions are 1-based: access(i) for 1 <= i <= size(), rank1(i) counts the
/// ones in [1..i], select1(j) returns the position of the j-th one.
///
/// Rank uses 512-bit superblocks holding absolute counts plus a 16-bit count per
/// 64-bit word relative to its superblock. Select keeps the superblock of every
/// 512th one and finishes with a binary search over the superblocks in between
/// followed by a word scan.
class BitVector {
public:
    static constexpr std::size_t kWordBits = 64;
    static constexpr std::size_t kSuperWords = 8;
    static constexpr std::size_t kSuperBits = kWordBits * kSuperWords;
    static constexpr std::size_t kSelectSample = 512;

    BitVector() { init_directories(); }

    BitVector(std::vector<std::uint64_t> words, std::size_t size) : m_words(std::move(words)), m_size(size) {
        m_words.resize(word_count(size), 0);
        if (size % kWordBits != 0 && !m_words.empty()) {
            m_words.back() &= (std::uint64_t{1} << (size % kWordBits)) - 1;
        }
        init_directories();
    }

    /// Parses a string of '0'/'1' characters; position 1 is the first character.
    static BitVector from_string(std::string_view bits) {
        std::vector<std::uint64_t> words(word_count(bits.size()), 0);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                words[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
            } else if (bits[i] != '0') {
                throw std::invalid_argument("bit string may only contain '0' and '1'");
            }
        }
        return BitVector(std::move(words), bits.size());
    }

    std::size_t size() const { return m_size; }
    std::size_t ones() const { return m_ones; }

    bool access(std::size_t i) const {
        if (i < 1 || i > m_size) {
            throw std::out_of_range("BitVector::access position " + std::to_string(i) + " outside [1, " +
                                    std::to_string(m_size) + "]");
        }
        return get(i - 1);
    }

    std::size_t rank1(std::size_t i) const {
        if (i > m_size) {
            throw std::out_of_range("BitVector::rank1 position " + std::to_string(i) + " exceeds size " +
                                    std::to_string(m_size));
        }
        return prefix_ones(i);
    }

    std::size_t rank0(std::size_t i) const { return i - rank1(i); }

    std::size_t select1(std::size_t j) const {
        if (j < 1 || j > m_ones) {
            throw std::out_of_range("BitVector::select1 ordinal " + std::to_string(j) + " outside [1, " +
                                    std::to_string(m_ones) + "]");
        }
        // superblock range known to contain the j-th one
        const std::size_t sample = (j - 1) / kSelectSample;
        std::size_t lo = m_select_samples[sample];
        std::size_t hi = sample + 1 < m_select_samples.size() ? m_select_samples[sample + 1] : m_super.size() - 1;
        // last superblock whose absolute count is < j
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo + 1) / 2;
            if (m_super[mid] < j) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        std::size_t remaining = j - m_super[lo];
        std::size_t w = lo * kSuperWords;
        const std::size_t w_end = std::min(w + kSuperWords, m_words.size());
        while (w + 1 < w_end && m_block[w + 1] < remaining) {
            ++w;
        }
        remaining -= m_block[w];
        return w * kWordBits + select_in_word(m_words[w], remaining) + 1;
    }

    const std::vector<std::uint64_t>& words() const { return m_words; }

    std::string to_string() const {
        std::string s(m_size, '0');
        for (std::size_t i = 0; i < m_size; ++i) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    void save(BinaryWriter& w) const {
        w.u64(m_size);
        for (const auto word : m_words) {
            w.u64(word);
        }
    }

    static BitVector load(BinaryReader& r) {
        const auto size = r.u64();
        if (size > (1ull << 46)) {
            throw FormatError("implausible bitvector length");
        }
        std::vector<std::uint64_t> words(word_count(size));
        for (auto& word : words) {
            word = r.u64();
        }
        return BitVector(std::move(words), size);
    }

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.m_size == b.m_size && a.m_words == b.m_words;
    }

private:
    static std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

    bool get(std::size_t i0) const { return (m_words[i0 / kWordBits] >> (i0 % kWordBits)) & 1u; }

    // ones among the first i bits (0-based prefix length)
    std::size_t prefix_ones(std::size_t i) const {
        if (i == m_size) {
            return m_ones;
        }
        const std::size_t w = i / kWordBits;
        const std::size_t bit = i % kWordBits;
        const std::uint64_t mask = (std::uint64_t{1} << bit) - 1;
        return m_super[w / kSuperWords] + m_block[w] + static_cast<std::size_t>(std::popcount(m_words[w] & mask));
    }

    static std::size_t select_in_word(std::uint64_t word, std::size_t r) {
        for (std::size_t k = 1; k < r; ++k) {
            word &= word - 1;
        }
        return static_cast<std::size_t>(std::countr_zero(word));
    }

    void init_directories() {
        const std::size_t supers = m_words.size() / kSuperWords + 1;
        m_super.assign(supers, 0);
        m_block.assign(m_words.size(), 0);
        m_select_samples.clear();

        std::size_t total = 0;
        std::size_t next_sample = 1;
        for (std::size_t s = 0; s < supers; ++s) {
            m_super[s] = total;
            std::uint16_t local = 0;
            for (std::size_t w = s * kSuperWords; w < std::min((s + 1) * kSuperWords, m_words.size()); ++w) {
                m_block[w] = local;
                const auto pc = static_cast<std::uint16_t>(std::popcount(m_words[w]));
                local = static_cast<std::uint16_t>(local + pc);
                // record the superblock of every kSelectSample-th one
                while (next_sample <= total + local) {
                    m_select_samples.push_back(s);
                    next_sample += kSelectSample;
                }
            }
            total += local;
        }
        m_ones = total;
    }

    std::vector<std::uint64_t> m_words;
    std::size_t m_size = 0;
    std::size_t m_ones = 0;
    std::vector<std::uint64_t> m_super;
    std::vector<std::uint16_t> m_block;
    std::vector<std::size_t> m_select_samples;
};

/// Append-only builder for BitVector.
class BitVectorBuilder {
public:
    void push_back(bool bit) {
        if (m_size % BitVector::kWordBits == 0) {
            m_words.push_back(0);
        }
        if (bit) {
            m_words.back() |= std::uint64_t{1} << (m_size % BitVector::kWordBits);
        }
        ++m_size;
    }

    void append_zeros(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            push_back(false);
        }
    }

    /// n zeros terminated by a one
    void append_unary(std::size_t n) {
        append_zeros(n);
        push_back(true);
    }

    std::size_t size() const { return m_size; }

    BitVector build() && { return BitVector(std::move(m_words), m_size); }

private:
    std::vector<std::uint64_t> m_words;
    std::size_t m_size = 0;
};

} // namespace rct
