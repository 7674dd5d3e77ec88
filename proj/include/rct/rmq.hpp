#pragma once

#include <rct/serialize.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

enum class Extremum : std::uint8_t { Min = 0, Max = 1 };

/// Range-minimum / range-maximum query over a fixed integer array.
///
/// Sparse table of argmin (argmax) indices, O(n log n) words, O(1) query.
/// Positions are 1-based; ties resolve to the leftmost index. The value array
/// is kept so callers can read the extremum through value().
template <typename T = std::int64_t>
class RangeExtremumIndex {
public:
    RangeExtremumIndex() = default;

    RangeExtremumIndex(std::vector<T> values, Extremum kind) : m_values(std::move(values)), m_kind(kind) {
        if (m_values.empty()) {
            throw std::invalid_argument("RangeExtremumIndex requires a non-empty value array");
        }
        build_table();
    }

    /// Index of the leftmost extremum of values[i..j].
    std::size_t query(std::size_t i, std::size_t j) const {
        if (i < 1 || i > j || j > m_values.size()) {
            throw std::out_of_range("RangeExtremumIndex::query range [" + std::to_string(i) + ", " +
                                    std::to_string(j) + "] invalid for length " + std::to_string(m_values.size()));
        }
        const std::size_t lo = i - 1;
        const std::size_t len = j - i + 1;
        const auto level = static_cast<std::size_t>(std::bit_width(len) - 1);
        const auto a = m_table[level][lo];
        const auto b = m_table[level][j - (std::size_t{1} << level)];
        return static_cast<std::size_t>(better(a, b)) + 1;
    }

    const T& value(std::size_t i) const { return m_values.at(i - 1); }
    const std::vector<T>& values() const { return m_values; }
    std::size_t size() const { return m_values.size(); }
    bool empty() const { return m_values.empty(); }
    Extremum kind() const { return m_kind; }

    /// mode byte, length, zigzag values; the table is rebuilt on load
    void save(BinaryWriter& w) const {
        w.u8(static_cast<std::uint8_t>(m_kind));
        w.varint(m_values.size());
        for (const auto& v : m_values) {
            w.svarint(static_cast<std::int64_t>(v));
        }
    }

    static RangeExtremumIndex load(BinaryReader& r) {
        const auto mode = r.u8();
        if (mode > 1) {
            throw FormatError("unknown range-extremum mode " + std::to_string(mode));
        }
        const auto n = r.length();
        RangeExtremumIndex idx;
        idx.m_kind = static_cast<Extremum>(mode);
        idx.m_values.resize(n);
        for (auto& v : idx.m_values) {
            v = static_cast<T>(r.svarint());
        }
        if (n > 0) {
            idx.build_table();
        }
        return idx;
    }

private:
    // a is assumed to be the left candidate
    std::uint32_t better(std::uint32_t a, std::uint32_t b) const {
        if (m_kind == Extremum::Min) {
            return m_values[b] < m_values[a] ? b : a;
        }
        return m_values[b] > m_values[a] ? b : a;
    }

    void build_table() {
        const std::size_t n = m_values.size();
        m_table.clear();
        m_table.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) {
            m_table[0][i] = static_cast<std::uint32_t>(i);
        }
        for (std::size_t level = 1; (std::size_t{1} << level) <= n; ++level) {
            const std::size_t half = std::size_t{1} << (level - 1);
            const auto& prev = m_table[level - 1];
            std::vector<std::uint32_t> cur(n - (std::size_t{1} << level) + 1);
            for (std::size_t i = 0; i < cur.size(); ++i) {
                cur[i] = better(prev[i], prev[i + half]);
            }
            m_table.push_back(std::move(cur));
        }
    }

    std::vector<T> m_values;
    Extremum m_kind = Extremum::Min;
    // m_table[k][i] = extremum index of values[i .. i + 2^k)
    std::vector<std::vector<std::uint32_t>> m_table;
};

} // namespace rct
