#pragma once

#include <rct/rmq.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

/// One RLZ factor: `length` symbols copied from reference position `start` (1-based).
struct Phrase {
    std::size_t start = 1;
    std::size_t length = 1;

    friend constexpr bool operator==(const Phrase&, const Phrase&) = default;
};

/// Suffix array over a reference text, answering leftmost-longest prefix matches.
template <typename Symbol>
class SuffixMatcher {
public:
    struct Match {
        std::size_t start = 0; // 1-based; 0 when nothing matched
        std::size_t length = 0;
    };

    explicit SuffixMatcher(std::span<const Symbol> text) {
        // rank symbols so suffixes compare as integers
        m_alphabet.assign(text.begin(), text.end());
        std::sort(m_alphabet.begin(), m_alphabet.end());
        m_alphabet.erase(std::unique(m_alphabet.begin(), m_alphabet.end()), m_alphabet.end());
        m_text.reserve(text.size());
        for (const auto& s : text) {
            m_text.push_back(symbol_rank(s));
        }
        build_suffix_array();
        if (!m_sa.empty()) {
            std::vector<std::int64_t> starts(m_sa.begin(), m_sa.end());
            m_leftmost = RangeExtremumIndex<std::int64_t>(std::move(starts), Extremum::Min);
        }
    }

    std::size_t size() const { return m_text.size(); }

    /// 0-based suffix array
    const std::vector<std::uint32_t>& suffix_array() const { return m_sa; }

    /// Longest prefix of `pattern` occurring in the text; among equal-length
    /// occurrences the smallest start wins.
    Match longest_prefix(std::span<const Symbol> pattern) const {
        std::size_t lo = 0;
        std::size_t hi = m_sa.size();
        std::size_t depth = 0;
        while (depth < pattern.size()) {
            const auto c = symbol_rank(pattern[depth]);
            if (c < 0) {
                break;
            }
            const auto key = [&](std::uint32_t suffix) -> std::int64_t {
                const std::size_t at = suffix + depth;
                return at < m_text.size() ? m_text[at] : -1;
            };
            const auto first = std::partition_point(m_sa.begin() + static_cast<std::ptrdiff_t>(lo),
                                                    m_sa.begin() + static_cast<std::ptrdiff_t>(hi),
                                                    [&](std::uint32_t s) { return key(s) < c; });
            const auto last = std::partition_point(first, m_sa.begin() + static_cast<std::ptrdiff_t>(hi),
                                                   [&](std::uint32_t s) { return key(s) <= c; });
            if (first == last) {
                break;
            }
            lo = static_cast<std::size_t>(first - m_sa.begin());
            hi = static_cast<std::size_t>(last - m_sa.begin());
            ++depth;
        }
        if (depth == 0) {
            return {};
        }
        const auto best = m_leftmost.query(lo + 1, hi);
        return {static_cast<std::size_t>(m_leftmost.value(best)) + 1, depth};
    }

private:
    std::int64_t symbol_rank(const Symbol& s) const {
        const auto it = std::lower_bound(m_alphabet.begin(), m_alphabet.end(), s);
        if (it == m_alphabet.end() || *it != s) {
            return -1;
        }
        return it - m_alphabet.begin();
    }

    // prefix doubling
    void build_suffix_array() {
        const std::size_t n = m_text.size();
        m_sa.resize(n);
        std::iota(m_sa.begin(), m_sa.end(), 0u);
        std::vector<std::int64_t> rank(m_text.begin(), m_text.end());
        std::vector<std::int64_t> next(n);
        for (std::size_t h = 1; n > 1; h <<= 1) {
            const auto second = [&](std::uint32_t i) -> std::int64_t { return i + h < n ? rank[i + h] : -1; };
            const auto less = [&](std::uint32_t a, std::uint32_t b) {
                return rank[a] != rank[b] ? rank[a] < rank[b] : second(a) < second(b);
            };
            std::sort(m_sa.begin(), m_sa.end(), less);
            next[m_sa[0]] = 0;
            for (std::size_t i = 1; i < n; ++i) {
                next[m_sa[i]] = next[m_sa[i - 1]] + (less(m_sa[i - 1], m_sa[i]) ? 1 : 0);
            }
            rank.swap(next);
            if (rank[m_sa[n - 1]] == static_cast<std::int64_t>(n - 1)) {
                break;
            }
        }
    }

    std::vector<Symbol> m_alphabet;
    std::vector<std::int64_t> m_text;
    std::vector<std::uint32_t> m_sa;
    RangeExtremumIndex<std::int64_t> m_leftmost;
};

/// Greedy RLZ factorization of `source` against the matcher's reference.
/// Throws std::invalid_argument when a source symbol never occurs in the reference.
template <typename Symbol>
std::vector<Phrase> rlz_parse(std::span<const Symbol> source, const SuffixMatcher<Symbol>& matcher) {
    std::vector<Phrase> phrases;
    std::size_t i = 0;
    while (i < source.size()) {
        const auto m = matcher.longest_prefix(source.subspan(i));
        if (m.length == 0) {
            throw std::invalid_argument("symbol at source position " + std::to_string(i + 1) +
                                        " does not occur in the reference");
        }
        phrases.push_back({m.start, m.length});
        i += m.length;
    }
    return phrases;
}

template <typename Symbol>
std::vector<Symbol> rlz_decompress(std::span<const Phrase> phrases, std::span<const Symbol> reference) {
    std::vector<Symbol> out;
    for (const auto& ph : phrases) {
        if (ph.start < 1 || ph.length < 1 || ph.start + ph.length - 1 > reference.size()) {
            throw std::out_of_range("phrase (" + std::to_string(ph.start) + "," + std::to_string(ph.length) +
                                    ") exceeds reference of length " + std::to_string(reference.size()));
        }
        const auto from = reference.begin() + static_cast<std::ptrdiff_t>(ph.start - 1);
        out.insert(out.end(), from, from + static_cast<std::ptrdiff_t>(ph.length));
    }
    return out;
}

} // namespace rct
