#pragma once

#include <rct/dataset.hpp>
#include <rct/query.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rct {

/// Brute-force answers straight from the raw positions.
class RawStore {
public:
    explicit RawStore(Dataset data) : m_data(std::move(data)) {
        std::sort(m_data.begin(), m_data.end(),
                  [](const RawTrajectory& a, const RawTrajectory& b) { return a.id < b.id; });
    }

    const Dataset& data() const { return m_data; }

    std::optional<Position> search_object(ObjectId id, Time t) const {
        const auto& tr = find(id);
        if (!tr.active_at(t)) {
            return std::nullopt;
        }
        return tr.at(t);
    }

    std::vector<TimedPosition> trajectory(ObjectId id, Time from, Time to) const {
        if (from > to) {
            throw std::invalid_argument("trajectory requires from <= to");
        }
        const auto& tr = find(id);
        std::vector<TimedPosition> out;
        for (Time t = std::max(from, tr.t_start); t <= std::min(to, tr.t_end()); ++t) {
            out.push_back({t, tr.at(t)});
        }
        return out;
    }

    std::vector<ObjectPosition> time_slice(const Region& r, Time t) const {
        check_region(r);
        std::vector<ObjectPosition> out;
        for (const auto& tr : m_data) {
            if (tr.active_at(t) && r.contains(tr.at(t))) {
                out.push_back({tr.id, tr.at(t)});
            }
        }
        return out;
    }

    std::vector<ObjectId> time_interval(const Region& r, Time from, Time to) const {
        check_region(r);
        if (from > to) {
            throw std::invalid_argument("time interval requires from <= to");
        }
        std::vector<ObjectId> out;
        for (const auto& tr : m_data) {
            for (Time t = std::max(from, tr.t_start); t <= std::min(to, tr.t_end()); ++t) {
                if (r.contains(tr.at(t))) {
                    out.push_back(tr.id);
                    break;
                }
            }
        }
        return out;
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

private:
    const RawTrajectory& find(ObjectId id) const {
        // linear on purpose: the oracle should be checkable by eye
        for (const auto& tr : m_data) {
            if (tr.id == id) {
                return tr;
            }
        }
        throw std::out_of_range("unknown object id " + std::to_string(id));
    }

    Dataset m_data;
};

} // namespace rct
