#pragma once

#include <rct/dataset.hpp>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace rct {

/// Route-following fleet: every object replays one of `routes` shared
/// movement patterns, with each step replaced by a random movement with
/// probability `mutation_rate`.
struct GeneratorConfig {
    std::size_t objects = 20;
    /// movements per object (positions = steps + 1)
    std::size_t steps = 100;
    /// coordinates lie in [0, grid - 1]
    Coord grid = 1024;
    std::size_t routes = 4;
    double mutation_rate = 0.05;
    Coord speed = 2;
    /// first timestamps are drawn from [0, stagger]
    Time stagger = 0;
    std::uint64_t seed = 1;
};

inline Dataset generate_fleet(const GeneratorConfig& cfg) {
    if (cfg.objects == 0 || cfg.routes == 0) {
        throw std::invalid_argument("generator needs at least one object and one route");
    }
    if (cfg.grid < 1 || cfg.speed < 0 || cfg.speed >= cfg.grid) {
        throw std::invalid_argument("generator needs grid >= 1 and 0 <= speed < grid");
    }
    if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0)) {
        throw std::invalid_argument("mutation rate must lie in [0, 1]");
    }
    if (cfg.stagger < 0) {
        throw std::invalid_argument("stagger must be non-negative");
    }

    std::mt19937_64 rng(cfg.seed);
    const auto uniform = [&rng](Coord lo, Coord hi) { return std::uniform_int_distribution<Coord>(lo, hi)(rng); };
    const auto random_move = [&] { return Movement{uniform(-cfg.speed, cfg.speed), uniform(-cfg.speed, cfg.speed)}; };

    // routes hold a heading for a while before turning
    std::vector<MovementSequence> routes(cfg.routes);
    for (auto& route : routes) {
        while (route.size() < cfg.steps) {
            const auto mv = random_move();
            const auto run = static_cast<std::size_t>(uniform(1, 20));
            for (std::size_t k = 0; k < run && route.size() < cfg.steps; ++k) {
                route.push_back(mv);
            }
        }
    }

    std::bernoulli_distribution mutate(cfg.mutation_rate);
    Dataset data;
    data.reserve(cfg.objects);
    for (std::size_t obj = 0; obj < cfg.objects; ++obj) {
        MovementSequence moves = routes[obj % cfg.routes];
        for (auto& mv : moves) {
            if (mutate(rng)) {
                mv = random_move();
            }
        }

        // start where the unclamped path fits the grid, if it can
        Coord lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0, cx = 0, cy = 0;
        for (const auto& mv : moves) {
            cx += mv.dx;
            cy += mv.dy;
            lo_x = std::min(lo_x, cx);
            hi_x = std::max(hi_x, cx);
            lo_y = std::min(lo_y, cy);
            hi_y = std::max(hi_y, cy);
        }
        const auto pick_start = [&](Coord lo, Coord hi) {
            const Coord from = -lo;
            const Coord to = cfg.grid - 1 - hi;
            return from <= to ? uniform(from, to) : uniform(0, cfg.grid - 1);
        };
        RawTrajectory tr;
        tr.id = obj + 1;
        tr.t_start = uniform(0, cfg.stagger);
        tr.positions.push_back({pick_start(lo_x, hi_x), pick_start(lo_y, hi_y)});
        for (auto mv : moves) {
            const auto& cur = tr.positions.back();
            // bounce off the border
            if (cur.x + mv.dx < 0 || cur.x + mv.dx >= cfg.grid) {
                mv.dx = -mv.dx;
            }
            if (cur.y + mv.dy < 0 || cur.y + mv.dy >= cfg.grid) {
                mv.dy = -mv.dy;
            }
            tr.positions.push_back(cur + mv);
        }
        data.push_back(std::move(tr));
    }
    return data;
}

/// Writes rows `object_id,timestamp,x,y` with a header line.
inline void write_csv(std::ostream& out, const Dataset& data) {
    out << "object_id,timestamp,x,y\n";
    for (const auto& tr : data) {
        for (std::size_t k = 0; k < tr.positions.size(); ++k) {
            out << tr.id << ',' << tr.t_start + static_cast<Time>(k) << ',' << tr.positions[k].x << ','
                << tr.positions[k].y << '\n';
        }
    }
}

} // namespace rct
