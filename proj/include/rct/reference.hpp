#pragma once

#include <rct/bit_vector.hpp>
#include <rct/common.hpp>
#include <rct/rmq.hpp>
#include <rct/serialize.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

enum class Axis : std::uint8_t { X = 0, Y = 1 };

struct ReferenceConfig {
    /// block length used to cut dataset sequences into candidate fragments
    std::size_t block_length = 8;
    /// target reference length as a fraction of the total movement count
    Fraction ref_fraction{1, 10};
};

/// Sampled local extrema of one cumulative coordinate of the reference.
///
/// `marks` has a one at every step t where the coordinate turns: for minima
/// C[t] < C[t-1] and C[t] <= C[t+1] (maxima symmetric). Steps 1 and m are
/// never marked. `ext` answers argmin/argmax over the coordinates at the
/// marked steps, so query ordinals map back to steps through select1(marks).
struct ExtremaIndex {
    BitVector marks;
    RangeExtremumIndex<Coord> ext;

    void save(BinaryWriter& w) const {
        marks.save(w);
        w.u8(ext.empty() ? 0 : 1);
        if (!ext.empty()) {
            ext.save(w);
        }
    }

    static ExtremaIndex load(BinaryReader& r) {
        ExtremaIndex e;
        e.marks = BitVector::load(r);
        if (r.u8() != 0) {
            e.ext = RangeExtremumIndex<Coord>::load(r);
        }
        if (e.ext.size() != e.marks.ones()) {
            throw FormatError("extrema index does not match its sample bitmap");
        }
        return e;
    }
};

/// Artificial reference movement sequence with its succinct overlays.
///
/// Each axis has two unary bitmaps: for a step with dx = v >= 0, x_p receives
/// v zeros and a one while x_n receives a bare one (mirrored for v < 0). The
/// zeros before the t-th one of a bitmap, select1(b, t) - t, are the total
/// movement in that direction over steps 1..t.
class Reference {
public:
    Reference() = default;

    explicit Reference(MovementSequence symbols) : m_symbols(std::move(symbols)) { build_overlays(); }

    /// Assembles a reference from frequent blocks of the dataset, then closes
    /// it over the dataset alphabet.
    ///
    /// Sequences are cut into blocks of `block_length` (the tail block may be
    /// shorter). Distinct blocks are chosen in descending frequency until the
    /// budget ref_fraction * total movements is reached, and the chosen blocks
    /// are laid out in order of first occurrence so neighbouring blocks of a
    /// common route stay adjacent.
    static Reference build(std::span<const MovementSequence> dataset, const ReferenceConfig& config) {
        if (dataset.empty()) {
            throw std::invalid_argument("cannot build a reference from an empty dataset");
        }
        if (config.block_length == 0) {
            throw std::invalid_argument("reference block length must be positive");
        }
        if (config.ref_fraction.den == 0) {
            throw std::invalid_argument("reference fraction denominator must be positive");
        }

        struct BlockInfo {
            std::size_t frequency = 0;
            std::size_t first_seen = 0;
        };
        std::map<MovementSequence, BlockInfo> blocks;
        std::size_t total = 0;
        std::size_t order = 0;
        for (const auto& seq : dataset) {
            total += seq.size();
            for (std::size_t i = 0; i < seq.size(); i += config.block_length) {
                const auto end = std::min(seq.size(), i + config.block_length);
                MovementSequence block(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                       seq.begin() + static_cast<std::ptrdiff_t>(end));
                auto [it, inserted] = blocks.try_emplace(std::move(block));
                if (inserted) {
                    it->second.first_seen = order++;
                }
                ++it->second.frequency;
            }
        }

        std::vector<std::pair<const MovementSequence*, BlockInfo>> ranked;
        ranked.reserve(blocks.size());
        for (const auto& [block, info] : blocks) {
            ranked.emplace_back(&block, info);
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.second.frequency != b.second.frequency ? a.second.frequency > b.second.frequency
                                                            : a.second.first_seen < b.second.first_seen;
        });

        const std::uint64_t budget = config.ref_fraction.ceil_of(total);
        std::size_t length = 0;
        std::size_t chosen = 0;
        while (chosen < ranked.size() && length < budget) {
            length += ranked[chosen].first->size();
            ++chosen;
        }
        ranked.resize(chosen);
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return a.second.first_seen < b.second.first_seen; });

        MovementSequence symbols;
        symbols.reserve(length);
        for (const auto& [block, info] : ranked) {
            symbols.insert(symbols.end(), block->begin(), block->end());
        }

        // alphabet closure, in order of first appearance in the dataset
        std::vector<Movement> present(symbols.begin(), symbols.end());
        std::sort(present.begin(), present.end());
        present.erase(std::unique(present.begin(), present.end()), present.end());
        for (const auto& seq : dataset) {
            for (const auto& mv : seq) {
                const auto it = std::lower_bound(present.begin(), present.end(), mv);
                if (it == present.end() || *it != mv) {
                    present.insert(it, mv);
                    symbols.push_back(mv);
                }
            }
        }
        return Reference(std::move(symbols));
    }

    /// number of reference steps m
    std::size_t size() const { return m_symbols.size(); }
    const MovementSequence& symbols() const { return m_symbols; }

    /// Movement of step t (1-based).
    const Movement& step(std::size_t t) const {
        if (t < 1 || t > m_symbols.size()) {
            throw std::out_of_range("reference step " + std::to_string(t) + " outside [1, " +
                                    std::to_string(m_symbols.size()) + "]");
        }
        return m_symbols[t - 1];
    }

    /// Cumulative displacement of steps i+1..j, for 0 <= i <= j <= m.
    Movement movement(std::size_t i, std::size_t j) const {
        if (i > j || j > m_symbols.size()) {
            throw std::out_of_range("reference movement(" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") invalid for length " + std::to_string(m_symbols.size()));
        }
        return {delta(m_x_pos, i, j) - delta(m_x_neg, i, j), delta(m_y_pos, i, j) - delta(m_y_neg, i, j)};
    }

    /// Bounding box of movement(i-1, t) over t in [i, j], for 1 <= i <= j <= m.
    RelativeBox mbb(std::size_t i, std::size_t j) const {
        if (i < 1 || i > j || j > m_symbols.size()) {
            throw std::out_of_range("reference mbb(" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") invalid for length " + std::to_string(m_symbols.size()));
        }
        const auto at_i = movement(i - 1, i);
        const auto at_j = movement(i - 1, j);
        return {
            extreme(Axis::X, Extremum::Min, i, j, at_i.dx, at_j.dx),
            extreme(Axis::Y, Extremum::Min, i, j, at_i.dy, at_j.dy),
            extreme(Axis::X, Extremum::Max, i, j, at_i.dx, at_j.dx),
            extreme(Axis::Y, Extremum::Max, i, j, at_i.dy, at_j.dy),
        };
    }

    const BitVector& positive(Axis a) const { return a == Axis::X ? m_x_pos : m_y_pos; }
    const BitVector& negative(Axis a) const { return a == Axis::X ? m_x_neg : m_y_neg; }
    const ExtremaIndex& extrema(Axis a, Extremum e) const { return m_extrema[slot(a, e)]; }

    /// m, alphabet table, symbol ids, the four unary bitmaps, the four extrema indexes
    void save(BinaryWriter& w) const {
        std::vector<Movement> alphabet(m_symbols.begin(), m_symbols.end());
        std::sort(alphabet.begin(), alphabet.end());
        alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
        w.varint(m_symbols.size());
        w.varint(alphabet.size());
        for (const auto& mv : alphabet) {
            w.svarint(mv.dx);
            w.svarint(mv.dy);
        }
        for (const auto& mv : m_symbols) {
            w.varint(static_cast<std::uint64_t>(std::lower_bound(alphabet.begin(), alphabet.end(), mv) -
                                                alphabet.begin()));
        }
        m_x_pos.save(w);
        m_x_neg.save(w);
        m_y_pos.save(w);
        m_y_neg.save(w);
        for (const auto& e : m_extrema) {
            e.save(w);
        }
    }

    static Reference load(BinaryReader& r) {
        Reference ref;
        const auto m = r.length();
        std::vector<Movement> alphabet(r.length());
        for (auto& mv : alphabet) {
            mv.dx = r.svarint();
            mv.dy = r.svarint();
        }
        ref.m_symbols.resize(m);
        for (auto& mv : ref.m_symbols) {
            const auto id = r.varint();
            if (id >= alphabet.size()) {
                throw FormatError("reference symbol id out of alphabet range");
            }
            mv = alphabet[id];
        }
        ref.m_x_pos = BitVector::load(r);
        ref.m_x_neg = BitVector::load(r);
        ref.m_y_pos = BitVector::load(r);
        ref.m_y_neg = BitVector::load(r);
        for (auto& e : ref.m_extrema) {
            e = ExtremaIndex::load(r);
        }
        for (const auto* b : {&ref.m_x_pos, &ref.m_x_neg, &ref.m_y_pos, &ref.m_y_neg}) {
            if (b->ones() != m) {
                throw FormatError("reference bitmap does not hold one terminator per step");
            }
        }
        return ref;
    }

private:
    static std::size_t slot(Axis a, Extremum e) {
        return static_cast<std::size_t>(a) * 2 + static_cast<std::size_t>(e);
    }

    // b.delta(t) = select1(b, t) - t, with b.delta(0) = 0
    static Coord delta(const BitVector& b, std::size_t t) {
        return t == 0 ? 0 : static_cast<Coord>(b.select1(t) - t);
    }

    static Coord delta(const BitVector& b, std::size_t i, std::size_t j) { return delta(b, j) - delta(b, i); }

    Coord coordinate(Axis a, std::size_t from, std::size_t to) const {
        const auto mv = movement(from, to);
        return a == Axis::X ? mv.dx : mv.dy;
    }

    Coord extreme(Axis a, Extremum e, std::size_t i, std::size_t j, Coord at_i, Coord at_j) const {
        const auto pick = [e](Coord u, Coord v) { return e == Extremum::Min ? std::min(u, v) : std::max(u, v); };
        Coord best = pick(at_i, at_j);
        const auto& ex = m_extrema[slot(a, e)];
        const std::size_t s = ex.marks.rank1(i - 1) + 1;
        const std::size_t t = ex.marks.rank1(j);
        if (s <= t) {
            const std::size_t step = ex.marks.select1(ex.ext.query(s, t));
            best = pick(best, coordinate(a, i - 1, step));
        }
        return best;
    }

    void build_overlays() {
        BitVectorBuilder xp, xn, yp, yn;
        const auto unary = [](BitVectorBuilder& pos, BitVectorBuilder& neg, Coord v) {
            pos.append_unary(v > 0 ? static_cast<std::size_t>(v) : 0);
            neg.append_unary(v < 0 ? static_cast<std::size_t>(-v) : 0);
        };
        for (const auto& mv : m_symbols) {
            unary(xp, xn, mv.dx);
            unary(yp, yn, mv.dy);
        }
        m_x_pos = std::move(xp).build();
        m_x_neg = std::move(xn).build();
        m_y_pos = std::move(yp).build();
        m_y_neg = std::move(yn).build();

        const std::size_t m = m_symbols.size();
        for (const auto axis : {Axis::X, Axis::Y}) {
            // cumulative coordinate C[0..m]
            std::vector<Coord> cum(m + 1, 0);
            for (std::size_t t = 1; t <= m; ++t) {
                const auto& mv = m_symbols[t - 1];
                cum[t] = cum[t - 1] + (axis == Axis::X ? mv.dx : mv.dy);
            }
            for (const auto kind : {Extremum::Min, Extremum::Max}) {
                const auto turns = [&](std::size_t t) {
                    return kind == Extremum::Min ? cum[t] < cum[t - 1] && cum[t] <= cum[t + 1]
                                                 : cum[t] > cum[t - 1] && cum[t] >= cum[t + 1];
                };
                BitVectorBuilder marks;
                std::vector<Coord> values;
                for (std::size_t t = 1; t <= m; ++t) {
                    const bool mark = t >= 2 && t < m && turns(t);
                    marks.push_back(mark);
                    if (mark) {
                        values.push_back(cum[t]);
                    }
                }
                auto& slot_ref = m_extrema[slot(axis, kind)];
                slot_ref.marks = std::move(marks).build();
                slot_ref.ext = values.empty() ? RangeExtremumIndex<Coord>()
                                              : RangeExtremumIndex<Coord>(std::move(values), kind);
            }
        }
    }

    MovementSequence m_symbols;
    BitVector m_x_pos, m_x_neg, m_y_pos, m_y_neg;
    std::array<ExtremaIndex, 4> m_extrema;
};

} // namespace rct
