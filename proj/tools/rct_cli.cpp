// rct: build, query and benchmark RLZ-compressed trajectory indexes.

#include <rct/rct.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

rct::Region parse_region(const std::string& text) {
    std::vector<rct::Coord> v;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto n = rct::detail::parse_int<rct::Coord>(field);
        if (!n) {
            throw UsageError("malformed region '" + text + "': expected x1,y1,x2,y2");
        }
        v.push_back(*n);
    }
    if (v.size() != 4) {
        throw UsageError("malformed region '" + text + "': expected x1,y1,x2,y2");
    }
    const rct::Region r{v[0], v[1], v[2], v[3]};
    if (!r.valid()) {
        throw UsageError("malformed region '" + text + "': requires x1 <= x2 and y1 <= y2");
    }
    return r;
}

/// "1/10" or "0.1"
rct::Fraction parse_fraction(const std::string& text) {
    rct::Fraction f;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const auto num = rct::detail::parse_int<std::uint64_t>(std::string_view(text).substr(0, slash));
        const auto den = rct::detail::parse_int<std::uint64_t>(std::string_view(text).substr(slash + 1));
        if (!num || !den || *den == 0) {
            throw UsageError("malformed fraction '" + text + "'");
        }
        f = {*num, *den};
    } else {
        const auto dot = text.find('.');
        const std::string whole = text.substr(0, dot);
        const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
        if (frac.size() > 9 || (whole.empty() && frac.empty())) {
            throw UsageError("malformed fraction '" + text + "'");
        }
        std::uint64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            den *= 10;
        }
        const auto w = whole.empty() ? std::optional<std::uint64_t>(0) : rct::detail::parse_int<std::uint64_t>(whole);
        const auto fr = frac.empty() ? std::optional<std::uint64_t>(0) : rct::detail::parse_int<std::uint64_t>(frac);
        if (!w || !fr) {
            throw UsageError("malformed fraction '" + text + "'");
        }
        f = {*w * den + *fr, den};
    }
    const auto g = std::gcd(f.num, f.den);
    if (g > 1) {
        f.num /= g;
        f.den /= g;
    }
    return f;
}

rct::Dataset read_dataset(const std::string& path, std::size_t* rows) {
    std::ifstream in(path);
    if (!in) {
        throw rct::DataError("cannot open " + path);
    }
    return rct::read_csv(in, rows);
}

rct::RCTIndex read_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw rct::DataError("cannot open " + path);
    }
    return rct::RCTIndex::load(in);
}

void print_result(const rct::Query& q, const rct::QueryResult& result) {
    std::visit(
        [&](const auto& query) {
            using Q = std::decay_t<decltype(query)>;
            if constexpr (std::is_same_v<Q, rct::SearchObjectQuery>) {
                const auto& pos = std::get<std::optional<rct::Position>>(result);
                if (pos) {
                    std::cout << query.id << ' ' << query.t << ' ' << pos->x << ' ' << pos->y << '\n';
                } else {
                    std::cout << "inactive\n";
                }
            } else if constexpr (std::is_same_v<Q, rct::TrajectoryQuery>) {
                for (const auto& tp : std::get<std::vector<rct::TimedPosition>>(result)) {
                    std::cout << query.id << ' ' << tp.t << ' ' << tp.pos.x << ' ' << tp.pos.y << '\n';
                }
            } else if constexpr (std::is_same_v<Q, rct::TimeSliceQuery>) {
                for (const auto& op : std::get<std::vector<rct::ObjectPosition>>(result)) {
                    std::cout << op.id << ' ' << query.t << ' ' << op.pos.x << ' ' << op.pos.y << '\n';
                }
            } else {
                for (const auto id : std::get<std::vector<rct::ObjectId>>(result)) {
                    std::cout << id << '\n';
                }
            }
        },
        q);
}

struct Latencies {
    std::string name;
    std::vector<double> micros;
};

void report(Latencies& l) {
    if (l.micros.empty()) {
        return;
    }
    std::sort(l.micros.begin(), l.micros.end());
    const auto pct = [&](double p) {
        const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(l.micros.size())));
        return l.micros[std::max<std::size_t>(rank, 1) - 1];
    };
    std::cout << "workload=" << l.name << " count=" << l.micros.size() << " p50_us=" << pct(0.50)
              << " p95_us=" << pct(0.95) << " max_us=" << l.micros.back() << '\n';
}

void run_bench(const rct::RCTIndex& idx, std::size_t n, std::uint64_t seed, const std::string& workload) {
    const auto& logs = idx.logs();
    const auto& grid = idx.grid();
    std::vector<std::string> kinds;
    if (workload.empty()) {
        kinds = {"object", "slice", "interval"};
    } else {
        kinds = {workload};
    }
    for (const auto& kind : kinds) {
        std::mt19937_64 rng(seed);
        const auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
            return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
        };
        const auto region = [&] {
            const auto w = uniform(0, grid.max_x / 10 + 1);
            const auto h = uniform(0, grid.max_y / 10 + 1);
            const auto x = uniform(0, grid.max_x);
            const auto y = uniform(0, grid.max_y);
            return rct::Region{x, y, x + w, y + h};
        };
        std::vector<rct::Query> queries;
        for (std::size_t i = 0; i < n; ++i) {
            const auto t = uniform(0, idx.last_time());
            if (kind == "object") {
                const auto& log = logs[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(logs.size()) - 1))];
                queries.push_back(rct::SearchObjectQuery{log.id(), uniform(log.t_start(), log.t_end())});
            } else if (kind == "slice") {
                queries.push_back(rct::TimeSliceQuery{region(), t});
            } else {
                queries.push_back(rct::TimeIntervalQuery{region(), t, t + uniform(0, idx.config().period * 2)});
            }
        }
        Latencies lat{kind, {}};
        std::size_t sink = 0;
        for (const auto& q : queries) {
            const auto start = std::chrono::steady_clock::now();
            const auto result = idx.answer(q);
            const auto stop = std::chrono::steady_clock::now();
            sink += result.index();
            lat.micros.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
        }
        report(lat);
        (void)sink;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressed trajectory index based on relative Lempel-Ziv"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "Build an index from a CSV of object_id,timestamp,x,y rows");
    std::string build_in, build_out;
    rct::IndexConfig cfg;
    std::string ref_fraction = "1/10";
    build->add_option("input", build_in, "Input CSV")->required();
    build->add_option("output", build_out, "Output index file")->required();
    build->add_option("--period,-d", cfg.period, "Snapshot period d")->check(CLI::PositiveNumber);
    build->add_option("--k", cfg.k, "k2-tree arity")->check(CLI::Range(2u, 16u));
    build->add_option("--ref-fraction", ref_fraction, "Reference length budget, e.g. 0.1 or 1/10");
    build->add_option("--block", cfg.block_length, "Reference block length B")->check(CLI::PositiveNumber);

    // query
    auto* query = app.add_subcommand("query", "Run one query against an index (or the raw CSV with --oracle)");
    std::string source;
    bool use_oracle = false;
    query->add_option("source", source, "Index file, or CSV when --oracle is given")->required();
    query->add_flag("--oracle", use_oracle, "Answer by brute force from the CSV");
    query->require_subcommand(1);
    rct::ObjectId q_id = 0;
    rct::Time q_t = 0, q_from = 0, q_to = 0;
    std::string q_region;
    auto* q_search = query->add_subcommand("search-object", "Position of an object at an instant");
    q_search->add_option("--id", q_id)->required();
    q_search->add_option("--t", q_t)->required();
    auto* q_traj = query->add_subcommand("trajectory", "Positions of an object over [from, to]");
    q_traj->add_option("--id", q_id)->required();
    q_traj->add_option("--from", q_from)->required();
    q_traj->add_option("--to", q_to)->required();
    auto* q_slice = query->add_subcommand("time-slice", "Objects inside a region at an instant");
    q_slice->add_option("--region", q_region, "x1,y1,x2,y2")->required();
    q_slice->add_option("--t", q_t)->required();
    auto* q_interval = query->add_subcommand("time-interval", "Objects inside a region at some instant of [from, to]");
    q_interval->add_option("--region", q_region, "x1,y1,x2,y2")->required();
    q_interval->add_option("--from", q_from)->required();
    q_interval->add_option("--to", q_to)->required();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic route-following fleet as CSV");
    rct::GeneratorConfig gcfg;
    gen->add_option("--objects", gcfg.objects)->check(CLI::PositiveNumber);
    gen->add_option("--steps", gcfg.steps, "Movements per object");
    gen->add_option("--grid", gcfg.grid, "Grid side");
    gen->add_option("--routes", gcfg.routes)->check(CLI::PositiveNumber);
    gen->add_option("--mutation-rate", gcfg.mutation_rate)->check(CLI::Range(0.0, 1.0));
    gen->add_option("--speed", gcfg.speed, "Maximum per-axis step");
    gen->add_option("--stagger", gcfg.stagger, "Start times drawn from [0, stagger]");
    gen->add_option("--seed", gcfg.seed);

    // bench
    auto* bench = app.add_subcommand("bench", "Measure query latencies on an index");
    std::string bench_index;
    std::size_t bench_n = 1000;
    std::uint64_t bench_seed = 1;
    std::string workload;
    bench->add_option("index", bench_index)->required();
    bench->add_option("--queries", bench_n);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--workload", workload)->check(CLI::IsMember({"slice", "interval", "object"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*build) {
            cfg.ref_fraction = parse_fraction(ref_fraction);
            std::size_t rows = 0;
            const auto data = read_dataset(build_in, &rows);
            const auto idx = rct::RCTIndex::build(data, cfg);
            std::ofstream out(build_out, std::ios::binary);
            if (!out) {
                throw rct::DataError("cannot write " + build_out);
            }
            const auto bytes = idx.save(out);
            const auto s = idx.stats();
            const auto input_bytes = 16 * rows;
            std::cout << "objects=" << s.objects << " movements=" << s.movements << " reference=" << s.reference_length
                      << " phrases=" << s.phrases << " index_bytes=" << bytes << " input_bytes=" << input_bytes
                      << " ratio=" << static_cast<double>(bytes) / static_cast<double>(input_bytes) << '\n';
        } else if (*query) {
            rct::Query q;
            if (*q_search) {
                q = rct::SearchObjectQuery{q_id, q_t};
            } else if (*q_traj) {
                if (q_from > q_to) {
                    throw UsageError("--from must not exceed --to");
                }
                q = rct::TrajectoryQuery{q_id, q_from, q_to};
            } else if (*q_slice) {
                q = rct::TimeSliceQuery{parse_region(q_region), q_t};
            } else {
                if (q_from > q_to) {
                    throw UsageError("--from must not exceed --to");
                }
                q = rct::TimeIntervalQuery{parse_region(q_region), q_from, q_to};
            }
            if (use_oracle) {
                const rct::RawStore store(read_dataset(source, nullptr));
                print_result(q, store.answer(q));
            } else {
                print_result(q, read_index(source).answer(q));
            }
        } else if (*gen) {
            rct::write_csv(std::cout, rct::generate_fleet(gcfg));
        } else if (*bench) {
            run_bench(read_index(bench_index), bench_n, bench_seed, workload);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
