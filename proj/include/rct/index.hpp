#pragma once

#include <rct/dataset.hpp>
#include <rct/k2_tree.hpp>
#include <rct/query.hpp>
#include <rct/reference.hpp>
#include <rct/serialize.hpp>
#include <rct/trajectory_log.hpp>

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

struct IndexConfig {
    /// snapshot period d
    Time period = 32;
    /// k2-tree arity
    unsigned k = 2;
    Fraction ref_fraction{1, 10};
    std::size_t block_length = 8;
    /// derived from the data when unset
    std::optional<Grid> grid;
};

struct IndexStats {
    std::size_t objects = 0;
    std::size_t movements = 0;
    std::size_t reference_length = 0;
    std::size_t phrases = 0;
};

/// Snapshots every d timestamps, one RLZ log per object and a shared
/// reference. Immutable once built; all queries are const.
class RCTIndex {
public:
    static constexpr char kMagic[4] = {'R', 'C', 'T', '1'};
    static constexpr std::uint16_t kVersion = 1;

    RCTIndex() = default;

    static RCTIndex build(const Dataset& data, const IndexConfig& config = {}) {
        if (config.period < 1) {
            throw std::invalid_argument("snapshot period must be at least 1");
        }
        if (config.k < 2) {
            throw std::invalid_argument("k2-tree arity must be at least 2");
        }
        RCTIndex idx;
        idx.m_config = config;
        idx.m_grid = config.grid ? *config.grid : grid_of(data);
        idx.m_config.grid = idx.m_grid;
        validate(data, idx.m_grid);
        idx.m_speed = speed_of(data);

        std::vector<MovementSequence> sequences;
        sequences.reserve(data.size());
        for (const auto& tr : data) {
            sequences.push_back(tr.movements());
        }
        idx.m_reference = Reference::build(sequences, {config.block_length, config.ref_fraction});
        const MovementMatcher matcher(idx.m_reference.symbols());
        for (const auto& tr : data) {
            idx.m_logs.push_back(TrajectoryLog::build(tr, idx.m_reference, matcher));
        }
        idx.finish_metadata();

        const Time d = config.period;
        for (Time tp = 0; tp <= idx.m_last_time; tp += d) {
            std::vector<SnapshotPoint> points;
            for (const auto& tr : data) {
                if (tr.active_at(tp)) {
                    points.push_back({tr.id, tr.at(tp)});
                }
            }
            idx.m_snapshots.push_back(Snapshot::build(tp, std::move(points), idx.m_grid.max_x, idx.m_grid.max_y, config.k));
        }
        idx.m_appearances.assign(idx.m_snapshots.size(), {});
        for (const auto& tr : data) {
            if (tr.t_start % d != 0) {
                idx.m_appearances[static_cast<std::size_t>(tr.t_start / d)].push_back(tr.id);
            }
        }
        return idx;
    }

    const IndexConfig& config() const { return m_config; }
    const Grid& grid() const { return m_grid; }
    Coord speed_max() const { return m_speed; }
    const Reference& reference() const { return m_reference; }
    const std::vector<TrajectoryLog>& logs() const { return m_logs; }
    const std::vector<Snapshot>& snapshots() const { return m_snapshots; }
    /// ids whose first timestamp lies strictly inside snapshot period P
    const std::vector<std::vector<ObjectId>>& appearances() const { return m_appearances; }
    Time last_time() const { return m_last_time; }

    const TrajectoryLog& log(ObjectId id) const {
        const auto it = std::lower_bound(m_logs.begin(), m_logs.end(), id,
                                         [](const TrajectoryLog& l, ObjectId v) { return l.id() < v; });
        if (it == m_logs.end() || it->id() != id) {
            throw std::out_of_range("unknown object id " + std::to_string(id));
        }
        return *it;
    }

    IndexStats stats() const {
        IndexStats s;
        s.objects = m_logs.size();
        s.reference_length = m_reference.size();
        for (const auto& l : m_logs) {
            s.movements += l.movement_count();
            s.phrases += l.phrase_count();
        }
        return s;
    }

    /// Position of `id` at t, or nullopt when the object is inactive.
    std::optional<Position> search_object(ObjectId id, Time t) const { return log(id).position_at(t, m_reference); }

    /// Positions of `id` for every active instant in [from, to].
    std::vector<TimedPosition> trajectory(ObjectId id, Time from, Time to) const {
        if (from > to) {
            throw std::invalid_argument("trajectory requires from <= to");
        }
        const auto& lg = log(id);
        const Time first = std::max(from, lg.t_start());
        const Time last = std::min(to, lg.t_end());
        std::vector<TimedPosition> out;
        if (first > last) {
            return out;
        }
        Position pos = *lg.position_at(first, m_reference);
        out.push_back({first, pos});

        auto u = static_cast<std::size_t>(first - lg.t_start());
        std::size_t phrase = u == 0 ? 0 : lg.phrase_of(u);
        std::size_t step = u == 0 ? 0 : lg.reference_step(u);
        for (Time t = first + 1; t <= last; ++t) {
            ++u;
            if (lg.phrase_starts().access(u)) {
                step = lg.reference_start(++phrase);
            } else {
                ++step;
            }
            pos = pos + m_reference.movement(step - 1, step);
            out.push_back({t, pos});
        }
        return out;
    }

    /// Objects inside R at t, sorted by id.
    std::vector<ObjectPosition> time_slice(const Region& r, Time t) const {
        check_region(r);
        std::vector<ObjectPosition> out;
        for (const auto id : slice_candidates(r, t)) {
            const auto pos = search_object(id, t);
            if (pos && r.contains(*pos)) {
                out.push_back({id, *pos});
            }
        }
        return out;
    }

    /// Ids of objects inside R at some instant of [from, to], sorted.
    std::vector<ObjectId> time_interval(const Region& r, Time from, Time to) const {
        check_region(r);
        if (from > to) {
            throw std::invalid_argument("time interval requires from <= to");
        }
        from = std::max<Time>(from, 0);
        to = std::min(to, m_last_time);
        std::vector<ObjectId> out;
        if (from > to) {
            return out;
        }
        const Time d = m_config.period;
        for (Time period = from / d; period <= to / d; ++period) {
            const Time tp = period * d;
            const Time sub_from = std::max(from, tp);
            const Time sub_to = std::min(to, tp + d - 1);
            for (const auto id : candidates(r, period, sub_to - tp)) {
                if (std::binary_search(out.begin(), out.end(), id)) {
                    continue;
                }
                if (reaches(log(id), r, sub_from, sub_to)) {
                    out.insert(std::lower_bound(out.begin(), out.end(), id), id);
                }
            }
        }
        return out;
    }

    /// Snapshot hits for R grown by speed_max * (t - t_p), plus objects that
    /// appear after the snapshot within the same period. Sorted, unique.
    std::vector<ObjectId> slice_candidates(const Region& r, Time t) const {
        check_region(r);
        if (t < 0 || t > m_last_time) {
            return {};
        }
        const Time d = m_config.period;
        return candidates(r, t / d, t % d);
    }

    QueryResult answer(const Query& q) const {
        return std::visit(
            [this](const auto& query) -> QueryResult {
                using Q = std::decay_t<decltype(query)>;
                if constexpr (std::is_same_v<Q, SearchObjectQuery>) {
                    return search_object(query.id, query.t);
                } else if constexpr (std::is_same_v<Q, TrajectoryQuery>) {
                    return trajectory(query.id, query.from, query.to);
                } else if constexpr (std::is_same_v<Q, TimeSliceQuery>) {
                    return time_slice(query.region, query.t);
                } else {
                    return time_interval(query.region, query.from, query.to);
                }
            },
            q);
    }

    /// Writes the index file; returns the number of bytes written.
    std::uint64_t save(std::ostream& out) const {
        BinaryWriter w(out);
        w.bytes(std::string(kMagic, 4));
        w.u16(kVersion);
        w.i64(m_config.period);
        w.u32(m_config.k);
        w.u64(m_config.ref_fraction.num);
        w.u64(m_config.ref_fraction.den);
        w.u64(m_config.block_length);
        w.i64(m_grid.max_x);
        w.i64(m_grid.max_y);
        w.i64(m_speed);
        m_reference.save(w);
        w.varint(m_logs.size());
        for (const auto& l : m_logs) {
            l.save(w);
        }
        w.varint(m_snapshots.size());
        for (const auto& sn : m_snapshots) {
            sn.save(w);
        }
        w.varint(m_appearances.size());
        for (const auto& ids : m_appearances) {
            w.varint(ids.size());
            for (const auto id : ids) {
                w.varint(id);
            }
        }
        return w.written();
    }

    static RCTIndex load(std::istream& in) {
        BinaryReader r(in);
        if (r.bytes(4) != std::string(kMagic, 4)) {
            throw FormatError("not an RCT index file (bad magic)");
        }
        if (const auto v = r.u16(); v != kVersion) {
            throw FormatError("unsupported index format version " + std::to_string(v));
        }
        RCTIndex idx;
        idx.m_config.period = r.i64();
        idx.m_config.k = r.u32();
        idx.m_config.ref_fraction.num = r.u64();
        idx.m_config.ref_fraction.den = r.u64();
        idx.m_config.block_length = r.u64();
        if (idx.m_config.period < 1 || idx.m_config.k < 2) {
            throw FormatError("invalid index configuration block");
        }
        idx.m_grid.max_x = r.i64();
        idx.m_grid.max_y = r.i64();
        idx.m_config.grid = idx.m_grid;
        idx.m_speed = r.i64();
        idx.m_reference = Reference::load(r);
        idx.m_logs.resize(r.length());
        for (auto& l : idx.m_logs) {
            l = TrajectoryLog::load(r);
        }
        idx.m_snapshots.resize(r.length());
        for (auto& sn : idx.m_snapshots) {
            sn = Snapshot::load(r);
        }
        idx.m_appearances.resize(r.length());
        for (auto& ids : idx.m_appearances) {
            ids.resize(r.length());
            for (auto& id : ids) {
                id = r.varint();
            }
        }
        idx.finish_metadata();
        if (idx.m_appearances.size() != idx.m_snapshots.size() ||
            static_cast<Time>(idx.m_snapshots.size()) != idx.m_last_time / idx.m_config.period + 1) {
            throw FormatError("snapshot section does not cover the logged time range");
        }
        return idx;
    }

private:
    void finish_metadata() {
        m_last_time = 0;
        for (const auto& l : m_logs) {
            m_last_time = std::max(m_last_time, l.t_end());
        }
    }

    Region clamp(const Region& r) const {
        return {std::max<Coord>(r.x1, 0), std::max<Coord>(r.y1, 0), std::min(r.x2, m_grid.max_x),
                std::min(r.y2, m_grid.max_y)};
    }

    std::vector<ObjectId> candidates(const Region& r, Time period, Time elapsed) const {
        const auto p = static_cast<std::size_t>(period);
        std::vector<ObjectId> ids;
        const Region grown = clamp(r.expanded(m_speed * elapsed));
        if (grown.valid()) {
            for (const auto& hit : m_snapshots[p].report_region(grown)) {
                ids.push_back(hit.id);
            }
        }
        ids.insert(ids.end(), m_appearances[p].begin(), m_appearances[p].end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    // Does the object enter R at some instant of [from, to]?
    bool reaches(const TrajectoryLog& lg, const Region& r, Time from, Time to) const {
        from = std::max(from, lg.t_start());
        to = std::min(to, lg.t_end());
        if (from > to) {
            return false;
        }
        auto u1 = static_cast<std::size_t>(from - lg.t_start());
        const auto u2 = static_cast<std::size_t>(to - lg.t_start());
        if (u1 == 0) {
            if (r.contains(lg.start_position())) {
                return true;
            }
            if (u2 == 0) {
                return false;
            }
            u1 = 1;
        }

        // phrases lying completely inside [u1, u2]
        const std::size_t ws = lg.phrase_starts().rank1(u1 - 1) + 1;
        std::size_t we = lg.phrase_of(u2);
        if (lg.phrase_last(we) != u2) {
            --we;
        }
        if (ws <= we) {
            if (phrases_reach(lg, r, ws, we)) {
                return true;
            }
            const auto left_end = lg.phrase_first(ws) - 1;
            const auto right_begin = lg.phrase_last(we) + 1;
            return (u1 <= left_end && piece_reaches(lg, r, u1, left_end)) ||
                   (right_begin <= u2 && piece_reaches(lg, r, right_begin, u2));
        }
        // [u1, u2] sits inside one phrase or straddles a single boundary
        const std::size_t j1 = lg.phrase_of(u1);
        const std::size_t j1_last = lg.phrase_last(j1);
        if (u2 <= j1_last) {
            return piece_reaches(lg, r, u1, u2);
        }
        return piece_reaches(lg, r, u1, j1_last) || piece_reaches(lg, r, j1_last + 1, u2);
    }

    // phrase range [ws, we], halved while its box only intersects R
    bool phrases_reach(const TrajectoryLog& lg, const Region& r, std::size_t ws, std::size_t we) const {
        const Region box = lg.phrase_box(ws, we);
        if (r.contains(box)) {
            return true;
        }
        if (!r.intersects(box)) {
            return false;
        }
        if (ws == we) {
            return piece_reaches(lg, r, lg.phrase_first(ws), lg.phrase_last(ws));
        }
        const std::size_t mid = ws + (we - ws) / 2;
        return phrases_reach(lg, r, ws, mid) || phrases_reach(lg, r, mid + 1, we);
    }

    // movements [a, b] of a single phrase, searched on the reference
    bool piece_reaches(const TrajectoryLog& lg, const Region& r, std::size_t a, std::size_t b) const {
        const std::size_t j = lg.phrase_of(a);
        const std::size_t p = lg.reference_start(j);
        const std::size_t first = p + (a - lg.phrase_first(j));
        const std::size_t last = first + (b - a);
        const Position origin = lg.previous_position(j) + m_reference.movement(p - 1, first - 1);
        return reference_reaches(r, first, last, origin);
    }

    bool reference_reaches(const Region& r, std::size_t i, std::size_t j, const Position& origin) const {
        const Region box = m_reference.mbb(i, j).at(origin);
        if (r.contains(box)) {
            return true;
        }
        if (!r.intersects(box) || i == j) {
            return false;
        }
        const std::size_t mid = i + (j - i) / 2;
        return reference_reaches(r, i, mid, origin) ||
               reference_reaches(r, mid + 1, j, origin + m_reference.movement(i - 1, mid));
    }

    IndexConfig m_config;
    Grid m_grid;
    Coord m_speed = 0;
    Reference m_reference;
    std::vector<TrajectoryLog> m_logs;
    std::vector<Snapshot> m_snapshots;
    std::vector<std::vector<ObjectId>> m_appearances;
    Time m_last_time = 0;
};

} // namespace rct
