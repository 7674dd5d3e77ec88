#pragma once

#include <rct/bit_vector.hpp>
#include <rct/dataset.hpp>
#include <rct/reference.hpp>
#include <rct/rlz.hpp>
#include <rct/rmq.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

using MovementMatcher = SuffixMatcher<Movement>;

/// RLZ-compressed movement log of a single object.
///
/// Movement u (1-based) takes the object from t_s + u - 1 to t_s + u. Bit u of
/// `phrase_starts` is set when movement u opens a phrase. For each phrase j
/// the log keeps its reference start p[j], the absolute position right
/// before its first movement, and the absolute bounding box of the positions
/// it visits (one array per bound, each with its range-extremum index).
class TrajectoryLog {
public:
    TrajectoryLog() = default;

    /// Parses the movements of `traj` against the reference behind `matcher`.
    static TrajectoryLog build(const RawTrajectory& traj, const Reference& ref, const MovementMatcher& matcher) {
        if (traj.positions.empty()) {
            throw DataError("object " + std::to_string(traj.id) + " has no positions");
        }
        if (matcher.size() != ref.size()) {
            throw std::invalid_argument("matcher was not built over this reference");
        }
        TrajectoryLog log;
        log.m_id = traj.id;
        log.m_t_start = traj.t_start;
        log.m_start = traj.positions.front();

        const auto moves = traj.movements();
        const auto phrases = rlz_parse<Movement>(moves, matcher);

        BitVectorBuilder starts;
        std::vector<Coord> x_min, x_max, y_min, y_max;
        std::size_t u = 0; // movements consumed
        for (const auto& ph : phrases) {
            log.m_phrase_ref.push_back(ph.start);
            log.m_prev.push_back(traj.positions[u]);
            Position lo = traj.positions[u + 1];
            Position hi = lo;
            for (std::size_t k = 0; k < ph.length; ++k) {
                starts.push_back(k == 0);
                const auto& p = traj.positions[u + k + 1];
                lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
                hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
            }
            x_min.push_back(lo.x);
            y_min.push_back(lo.y);
            x_max.push_back(hi.x);
            y_max.push_back(hi.y);
            u += ph.length;
        }
        log.m_phrase_starts = std::move(starts).build();
        if (!phrases.empty()) {
            log.m_x_min = RangeExtremumIndex<Coord>(std::move(x_min), Extremum::Min);
            log.m_x_max = RangeExtremumIndex<Coord>(std::move(x_max), Extremum::Max);
            log.m_y_min = RangeExtremumIndex<Coord>(std::move(y_min), Extremum::Min);
            log.m_y_max = RangeExtremumIndex<Coord>(std::move(y_max), Extremum::Max);
        }
        return log;
    }

    ObjectId id() const { return m_id; }
    Time t_start() const { return m_t_start; }
    Time t_end() const { return m_t_start + static_cast<Time>(m_phrase_starts.size()); }
    bool active_at(Time t) const { return t >= t_start() && t <= t_end(); }
    const Position& start_position() const { return m_start; }

    std::size_t movement_count() const { return m_phrase_starts.size(); }
    std::size_t phrase_count() const { return m_phrase_ref.size(); }

    /// Phrase j (1-based) as a (reference start, length) pair.
    Phrase phrase(std::size_t j) const {
        const auto first = phrase_first(j);
        const auto next = j < phrase_count() ? phrase_first(j + 1) : movement_count() + 1;
        return {m_phrase_ref.at(j - 1), next - first};
    }

    std::vector<Phrase> phrases() const {
        std::vector<Phrase> out;
        for (std::size_t j = 1; j <= phrase_count(); ++j) {
            out.push_back(phrase(j));
        }
        return out;
    }

    /// First movement of phrase j.
    std::size_t phrase_first(std::size_t j) const { return m_phrase_starts.select1(j); }
    /// Last movement of phrase j.
    std::size_t phrase_last(std::size_t j) const {
        return j < phrase_count() ? m_phrase_starts.select1(j + 1) - 1 : movement_count();
    }
    /// Phrase containing movement u.
    std::size_t phrase_of(std::size_t u) const { return m_phrase_starts.rank1(u); }

    std::size_t reference_start(std::size_t j) const { return m_phrase_ref.at(j - 1); }
    const Position& previous_position(std::size_t j) const { return m_prev.at(j - 1); }
    const BitVector& phrase_starts() const { return m_phrase_starts; }

    /// Absolute box of the positions visited by phrases ws..we.
    Region phrase_box(std::size_t ws, std::size_t we) const {
        return {m_x_min.value(m_x_min.query(ws, we)), m_y_min.value(m_y_min.query(ws, we)),
                m_x_max.value(m_x_max.query(ws, we)), m_y_max.value(m_y_max.query(ws, we))};
    }

    /// Position at t, or nullopt outside the active period.
    std::optional<Position> position_at(Time t, const Reference& ref) const {
        if (!active_at(t)) {
            return std::nullopt;
        }
        const auto u = static_cast<std::size_t>(t - m_t_start);
        if (u == 0) {
            return m_start;
        }
        const std::size_t j = m_phrase_starts.rank1(u);
        const std::size_t k = u - m_phrase_starts.select1(j);
        const std::size_t p = m_phrase_ref[j - 1];
        return m_prev[j - 1] + ref.movement(p - 1, p + k);
    }

    /// Reference step that replays movement u.
    std::size_t reference_step(std::size_t u) const {
        const std::size_t j = phrase_of(u);
        return m_phrase_ref[j - 1] + (u - phrase_first(j));
    }

    void save(BinaryWriter& w) const {
        w.varint(m_id);
        w.i64(m_t_start);
        w.svarint(m_start.x);
        w.svarint(m_start.y);
        w.varint(m_phrase_ref.size());
        for (const auto p : m_phrase_ref) {
            w.varint(p);
        }
        m_phrase_starts.save(w);
        for (const auto& pos : m_prev) {
            w.svarint(pos.x);
            w.svarint(pos.y);
        }
        if (!m_phrase_ref.empty()) {
            m_x_min.save(w);
            m_x_max.save(w);
            m_y_min.save(w);
            m_y_max.save(w);
        }
    }

    static TrajectoryLog load(BinaryReader& r) {
        TrajectoryLog log;
        log.m_id = r.varint();
        log.m_t_start = r.i64();
        log.m_start.x = r.svarint();
        log.m_start.y = r.svarint();
        log.m_phrase_ref.resize(r.length());
        for (auto& p : log.m_phrase_ref) {
            p = r.varint();
        }
        log.m_phrase_starts = BitVector::load(r);
        log.m_prev.resize(log.m_phrase_ref.size());
        for (auto& pos : log.m_prev) {
            pos.x = r.svarint();
            pos.y = r.svarint();
        }
        if (log.m_phrase_starts.ones() != log.m_phrase_ref.size()) {
            throw FormatError("log of object " + std::to_string(log.m_id) + " has inconsistent phrase count");
        }
        if (!log.m_phrase_ref.empty()) {
            log.m_x_min = RangeExtremumIndex<Coord>::load(r);
            log.m_x_max = RangeExtremumIndex<Coord>::load(r);
            log.m_y_min = RangeExtremumIndex<Coord>::load(r);
            log.m_y_max = RangeExtremumIndex<Coord>::load(r);
            for (const auto* a : {&log.m_x_min, &log.m_x_max, &log.m_y_min, &log.m_y_max}) {
                if (a->size() != log.m_phrase_ref.size()) {
                    throw FormatError("log of object " + std::to_string(log.m_id) + " has inconsistent MBB arrays");
                }
            }
        }
        return log;
    }

private:
    ObjectId m_id = 0;
    Time m_t_start = 0;
    Position m_start;
    std::vector<std::size_t> m_phrase_ref;
    BitVector m_phrase_starts;
    std::vector<Position> m_prev;
    RangeExtremumIndex<Coord> m_x_min, m_x_max, m_y_min, m_y_max;
};

} // namespace rct
