#pragma once

#include <rct/bit_vector.hpp>
#include <rct/common.hpp>
#include <rct/serialize.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

struct SnapshotPoint {
    ObjectId id = 0;
    Position pos;

    friend constexpr auto operator<=>(const SnapshotPoint&, const SnapshotPoint&) = default;
};

/// Positions of all objects active at one timestamp, stored as a k^2-tree.
///
/// The grid is padded to a square of side k^h. Internal levels live in T, the
/// last level in L. Every set bit of L is an occupied cell; the object ids of
/// the cells are concatenated in the order of the L bits and a delimiter
/// bitmap marks the first id of each cell.
class Snapshot {
public:
    Snapshot() = default;

    /// Points must lie in [0, max_x] x [0, max_y] with unique ids.
    static Snapshot build(Time timestamp, std::vector<SnapshotPoint> points, Coord max_x, Coord max_y,
                          unsigned k = 2) {
        if (k < 2) {
            throw std::invalid_argument("k2-tree arity must be at least 2");
        }
        if (max_x < 0 || max_y < 0) {
            throw std::invalid_argument("k2-tree grid bounds must be non-negative");
        }
        Snapshot sn;
        sn.m_timestamp = timestamp;
        sn.m_k = k;
        sn.m_height = 1;
        sn.m_side = k;
        const auto extent = static_cast<std::uint64_t>(std::max(max_x, max_y)) + 1;
        while (sn.m_side < extent) {
            sn.m_side *= k;
            ++sn.m_height;
        }

        {
            std::vector<ObjectId> ids;
            ids.reserve(points.size());
            for (const auto& pt : points) {
                if (pt.pos.x < 0 || pt.pos.x > max_x || pt.pos.y < 0 || pt.pos.y > max_y) {
                    throw DataError("snapshot point of object " + std::to_string(pt.id) + " at (" +
                                    std::to_string(pt.pos.x) + "," + std::to_string(pt.pos.y) +
                                    ") lies outside the grid");
                }
                ids.push_back(pt.id);
            }
            std::sort(ids.begin(), ids.end());
            if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
                throw DataError("duplicate object id in snapshot at t=" + std::to_string(timestamp));
            }
        }

        // child digit per level, root level first
        struct Keyed {
            std::vector<std::uint32_t> path;
            ObjectId id;
        };
        std::vector<Keyed> keyed;
        keyed.reserve(points.size());
        for (const auto& pt : points) {
            Keyed kp{std::vector<std::uint32_t>(sn.m_height), pt.id};
            std::uint64_t cell = sn.m_side;
            for (std::size_t level = 0; level < sn.m_height; ++level) {
                cell /= k;
                const auto cx = (static_cast<std::uint64_t>(pt.pos.x) / cell) % k;
                const auto cy = (static_cast<std::uint64_t>(pt.pos.y) / cell) % k;
                kp.path[level] = static_cast<std::uint32_t>(cy * k + cx);
            }
            keyed.push_back(std::move(kp));
        }
        std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
            return a.path != b.path ? a.path < b.path : a.id < b.id;
        });

        const std::size_t fanout = std::size_t{k} * k;
        BitVectorBuilder tree;
        BitVectorBuilder leaves;
        for (std::size_t level = 0; level < sn.m_height; ++level) {
            auto& out = level + 1 == sn.m_height ? leaves : tree;
            std::size_t i = 0;
            while (i < keyed.size()) {
                // one node per distinct prefix of length `level`
                std::size_t end = i;
                std::vector<bool> children(fanout, false);
                while (end < keyed.size() &&
                       std::equal(keyed[i].path.begin(), keyed[i].path.begin() + level, keyed[end].path.begin())) {
                    children[keyed[end].path[level]] = true;
                    ++end;
                }
                for (const bool c : children) {
                    out.push_back(c);
                }
                i = end;
            }
        }
        sn.m_tree = std::move(tree).build();
        sn.m_leaves = std::move(leaves).build();

        BitVectorBuilder delim;
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            delim.push_back(i == 0 || keyed[i].path != keyed[i - 1].path);
            sn.m_ids.push_back(keyed[i].id);
        }
        sn.m_delim = std::move(delim).build();
        return sn;
    }

    /// Objects whose position lies in the closed region, sorted by id.
    std::vector<SnapshotPoint> report_region(const Region& r) const {
        check_region(r);
        std::vector<SnapshotPoint> out;
        if (m_ids.empty()) {
            return out;
        }
        const Region universe{0, 0, static_cast<Coord>(m_side) - 1, static_cast<Coord>(m_side) - 1};
        if (r.intersects(universe)) {
            visit(0, 0, 0, m_side, r, out);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    Time timestamp() const { return m_timestamp; }
    std::uint64_t side() const { return m_side; }
    unsigned arity() const { return m_k; }
    std::size_t object_count() const { return m_ids.size(); }
    std::size_t cell_count() const { return m_leaves.ones(); }
    const BitVector& tree_bits() const { return m_tree; }
    const BitVector& leaf_bits() const { return m_leaves; }

    void save(BinaryWriter& w) const {
        w.i64(m_timestamp);
        w.u64(m_side);
        w.u32(m_k);
        m_tree.save(w);
        m_leaves.save(w);
        m_delim.save(w);
        w.varint(m_ids.size());
        for (const auto id : m_ids) {
            w.varint(id);
        }
    }

    static Snapshot load(BinaryReader& r) {
        Snapshot sn;
        sn.m_timestamp = r.i64();
        sn.m_side = r.u64();
        sn.m_k = r.u32();
        if (sn.m_k < 2 || sn.m_side < sn.m_k) {
            throw FormatError("invalid k2-tree header");
        }
        sn.m_height = 1;
        for (std::uint64_t s = sn.m_k; s < sn.m_side; s *= sn.m_k) {
            ++sn.m_height;
        }
        sn.m_tree = BitVector::load(r);
        sn.m_leaves = BitVector::load(r);
        sn.m_delim = BitVector::load(r);
        sn.m_ids.resize(r.length());
        for (auto& id : sn.m_ids) {
            id = r.varint();
        }
        if (sn.m_delim.size() != sn.m_ids.size() || sn.m_delim.ones() != sn.m_leaves.ones()) {
            throw FormatError("k2-tree payload does not match its leaf bitmap");
        }
        return sn;
    }

private:
    // children of the node whose children block starts at `base` in T ++ L
    void visit(std::size_t base, Coord x0, Coord y0, std::uint64_t side, const Region& r,
               std::vector<SnapshotPoint>& out) const {
        const std::uint64_t cell = side / m_k;
        for (std::size_t c = 0; c < std::size_t{m_k} * m_k; ++c) {
            const Coord cx = x0 + static_cast<Coord>((c % m_k) * cell);
            const Coord cy = y0 + static_cast<Coord>((c / m_k) * cell);
            const Region square{cx, cy, cx + static_cast<Coord>(cell) - 1, cy + static_cast<Coord>(cell) - 1};
            if (!r.intersects(square)) {
                continue;
            }
            const std::size_t pos = base + c;
            if (pos < m_tree.size()) {
                if (m_tree.access(pos + 1)) {
                    visit(m_tree.rank1(pos + 1) * m_k * m_k, cx, cy, cell, r, out);
                }
                continue;
            }
            const std::size_t leaf = pos - m_tree.size();
            if (!m_leaves.access(leaf + 1)) {
                continue;
            }
            const std::size_t ordinal = m_leaves.rank1(leaf) + 1;
            const std::size_t first = m_delim.select1(ordinal) - 1;
            const std::size_t last = ordinal < m_delim.ones() ? m_delim.select1(ordinal + 1) - 1 : m_ids.size();
            for (std::size_t i = first; i < last; ++i) {
                out.push_back({m_ids[i], {cx, cy}});
            }
        }
    }

    Time m_timestamp = 0;
    unsigned m_k = 2;
    std::size_t m_height = 1;
    std::uint64_t m_side = 2;
    BitVector m_tree;
    BitVector m_leaves;
    BitVector m_delim;
    std::vector<ObjectId> m_ids;
};

} // namespace rct
