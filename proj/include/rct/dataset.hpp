#pragma once

#include <rct/common.hpp>

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace rct {

/// Positions of one object at consecutive timestamps t_start, t_start + 1, ...
struct RawTrajectory {
    ObjectId id = 0;
    Time t_start = 0;
    std::vector<Position> positions;

    Time t_end() const { return t_start + static_cast<Time>(positions.size()) - 1; }

    bool active_at(Time t) const { return t >= t_start && t <= t_end(); }

    const Position& at(Time t) const { return positions[static_cast<std::size_t>(t - t_start)]; }

    MovementSequence movements() const {
        MovementSequence out;
        out.reserve(positions.empty() ? 0 : positions.size() - 1);
        for (std::size_t i = 1; i < positions.size(); ++i) {
            out.push_back(positions[i] - positions[i - 1]);
        }
        return out;
    }
};

/// Trajectories sorted by object id.
using Dataset = std::vector<RawTrajectory>;

/// Inclusive grid extent, [0, max_x] x [0, max_y].
struct Grid {
    Coord max_x = 0;
    Coord max_y = 0;

    friend constexpr bool operator==(const Grid&, const Grid&) = default;
};

/// Smallest grid holding every position of the dataset.
inline Grid grid_of(const Dataset& data) {
    Grid g;
    for (const auto& tr : data) {
        for (const auto& p : tr.positions) {
            g.max_x = std::max(g.max_x, p.x);
            g.max_y = std::max(g.max_y, p.y);
        }
    }
    return g;
}

/// Checks the dataset contract; the error names the offending object and timestamp.
inline void validate(const Dataset& data, const Grid& grid) {
    if (data.empty()) {
        throw DataError("dataset holds no trajectories");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& tr = data[i];
        if (i > 0 && data[i - 1].id >= tr.id) {
            throw DataError("object ids must be unique and sorted (object " + std::to_string(tr.id) + ")");
        }
        if (tr.positions.empty()) {
            throw DataError("object " + std::to_string(tr.id) + " has no positions");
        }
        if (tr.t_start < 0) {
            throw DataError("object " + std::to_string(tr.id) + " starts at negative timestamp " +
                            std::to_string(tr.t_start));
        }
        for (std::size_t k = 0; k < tr.positions.size(); ++k) {
            const auto& p = tr.positions[k];
            if (p.x < 0 || p.y < 0 || p.x > grid.max_x || p.y > grid.max_y) {
                throw DataError("object " + std::to_string(tr.id) + " at t=" +
                                std::to_string(tr.t_start + static_cast<Time>(k)) + " lies outside the grid");
            }
        }
    }
}

/// Largest per-axis single-step displacement of the dataset.
inline Coord speed_of(const Dataset& data) {
    Coord s = 0;
    for (const auto& tr : data) {
        for (std::size_t i = 1; i < tr.positions.size(); ++i) {
            const auto mv = tr.positions[i] - tr.positions[i - 1];
            s = std::max({s, mv.dx < 0 ? -mv.dx : mv.dx, mv.dy < 0 ? -mv.dy : mv.dy});
        }
    }
    return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    s = trim(s);
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

} // namespace detail

/// Reads `object_id,timestamp,x,y` rows. A header line is accepted as the
/// first line. Rows may come in any order; they are sorted by (id, timestamp)
/// and must then form gap-free, duplicate-free runs per object.
inline Dataset read_csv(std::istream& in, std::size_t* row_count = nullptr) {
    struct Row {
        ObjectId id;
        Time t;
        Coord x, y;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t from = 0;
        while (true) {
            const auto comma = text.find(',', from);
            fields.push_back(text.substr(from, comma == std::string_view::npos ? comma : comma - from));
            if (comma == std::string_view::npos) {
                break;
            }
            from = comma + 1;
        }
        const auto id = fields.size() == 4 ? detail::parse_int<ObjectId>(fields[0]) : std::nullopt;
        const auto t = fields.size() == 4 ? detail::parse_int<Time>(fields[1]) : std::nullopt;
        const auto x = fields.size() == 4 ? detail::parse_int<Coord>(fields[2]) : std::nullopt;
        const auto y = fields.size() == 4 ? detail::parse_int<Coord>(fields[3]) : std::nullopt;
        if (!id || !t || !x || !y) {
            if (rows.empty() && line_no == 1 && fields.size() == 4) {
                continue; // header
            }
            throw DataError("row " + std::to_string(line_no) +
                            ": expected four integer fields object_id,timestamp,x,y");
        }
        rows.push_back({*id, *t, *x, *y, line_no});
    }
    if (row_count) {
        *row_count = rows.size();
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return std::tie(a.id, a.t) < std::tie(b.id, b.t); });
    Dataset data;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.t < 0 || r.x < 0 || r.y < 0) {
            throw DataError("row " + std::to_string(r.line) + ": timestamps and coordinates must be non-negative");
        }
        if (data.empty() || data.back().id != r.id) {
            data.push_back({r.id, r.t, {}});
        } else {
            const auto& prev = rows[i - 1];
            if (prev.t == r.t) {
                throw DataError("row " + std::to_string(r.line) + ": duplicate timestamp " + std::to_string(r.t) +
                                " for object " + std::to_string(r.id) + " (also row " +
                                std::to_string(prev.line) + ")");
            }
            if (r.t != prev.t + 1) {
                throw DataError("row " + std::to_string(r.line) + ": object " + std::to_string(r.id) +
                                " has a gap between timestamps " + std::to_string(prev.t) + " and " +
                                std::to_string(r.t));
            }
        }
        data.back().positions.push_back({r.x, r.y});
    }
    return data;
}

} // namespace rct
