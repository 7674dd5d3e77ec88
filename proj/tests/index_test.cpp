#include <rct/index.hpp>
#include <rct/oracle.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace rct {
namespace {

RCTIndex stationary_index() {
    return RCTIndex::build({{1, 0, std::vector<Position>(10, Position{5, 5})}}, {.period = 4});
}

TEST(Index, StationaryObjectSnapshots) {
    const auto idx = stationary_index();
    ASSERT_EQ(idx.snapshots().size(), 3u);
    for (std::size_t s = 0; s < 3; ++s) {
        EXPECT_EQ(idx.snapshots()[s].timestamp(), static_cast<Time>(4 * s));
        const auto hits = idx.snapshots()[s].report_region({0, 0, 5, 5});
        ASSERT_EQ(hits.size(), 1u);
        EXPECT_EQ(hits[0].id, 1u);
    }
    for (Time t = 0; t < 10; ++t) {
        EXPECT_EQ(idx.search_object(1, t), (Position{5, 5}));
    }
    EXPECT_EQ(idx.search_object(1, 10), std::nullopt);
    EXPECT_EQ(idx.search_object(1, -1), std::nullopt);
}

TEST(Index, EmptyDatasetRejected) { EXPECT_THROW(RCTIndex::build({}), DataError); }

TEST(Index, OutOfGridRejected) {
    IndexConfig cfg;
    cfg.grid = Grid{3, 3};
    try {
        RCTIndex::build({{6, 2, {{0, 0}, {4, 0}}}}, cfg);
        FAIL() << "expected rejection";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("object 6"), std::string::npos);
        EXPECT_NE(msg.find("t=3"), std::string::npos);
    }
}

TEST(Index, UnknownIdAndMalformedInputs) {
    const auto idx = stationary_index();
    EXPECT_THROW(idx.search_object(2, 0), std::out_of_range);
    EXPECT_THROW(idx.trajectory(2, 0, 1), std::out_of_range);
    EXPECT_THROW(idx.trajectory(1, 3, 1), std::invalid_argument);
    EXPECT_THROW(idx.time_slice({3, 0, 1, 1}, 0), std::invalid_argument);
    EXPECT_THROW(idx.time_interval({0, 0, 1, 1}, 4, 2), std::invalid_argument);
}

TEST(Index, TrajectoryExamples) {
    const Dataset data{{3, 1, {{0, 0}, {1, 0}, {2, 1}, {2, 2}, {1, 2}}}};
    const auto idx = RCTIndex::build(data, {.period = 2});
    const auto single = idx.trajectory(3, 2, 2);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].pos, *idx.search_object(3, 2));
    const auto full = idx.trajectory(3, -5, 50);
    ASSERT_EQ(full.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_EQ(full[k].t, static_cast<Time>(k + 1));
        EXPECT_EQ(full[k].pos, data[0].positions[k]);
    }
    EXPECT_TRUE(idx.trajectory(3, 7, 9).empty());
}

TEST(Index, SliceAndIntervalBasics) {
    const Dataset data{{1, 0, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}}, {2, 3, {{9, 9}, {8, 9}, {7, 9}}}};
    const auto idx = RCTIndex::build(data, {.period = 2});
    const Region all{0, 0, 9, 9};
    EXPECT_EQ(idx.time_slice(all, 3).size(), 2u);
    EXPECT_TRUE(idx.time_slice({4, 4, 5, 5}, 3).empty());
    EXPECT_EQ(idx.time_interval(all, 0, 10), (std::vector<ObjectId>{1, 2}));
    EXPECT_EQ(idx.time_interval({7, 9, 7, 9}, 0, 4), std::vector<ObjectId>{});
    EXPECT_EQ(idx.time_interval({7, 9, 7, 9}, 0, 5), std::vector<ObjectId>{2});
    // object 2 appears mid-period and is not in snapshot t=2
    EXPECT_EQ(idx.appearances()[1], std::vector<ObjectId>{2});
    EXPECT_EQ(idx.time_slice({9, 9, 9, 9}, 3).size(), 1u);
}

TEST(Index, InvariantsOnRandomData) {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 10; ++round) {
        const auto data = testing::random_dataset(rng);
        const Time d = std::uniform_int_distribution<Time>(1, 40)(rng);
        const auto idx = RCTIndex::build(data, {.period = d});
        for (const auto& tr : data) {
            for (std::size_t k = 1; k < tr.positions.size(); ++k) {
                const auto mv = tr.positions[k] - tr.positions[k - 1];
                ASSERT_LE(std::abs(mv.dx), idx.speed_max());
                ASSERT_LE(std::abs(mv.dy), idx.speed_max());
            }
        }
        ASSERT_EQ(static_cast<Time>(idx.snapshots().size()), idx.last_time() / d + 1);
        for (const auto& sn : idx.snapshots()) {
            std::vector<ObjectId> expected;
            for (const auto& tr : data) {
                if (tr.active_at(sn.timestamp())) {
                    expected.push_back(tr.id);
                }
            }
            std::vector<ObjectId> got;
            for (const auto& hit : sn.report_region({0, 0, idx.grid().max_x, idx.grid().max_y})) {
                got.push_back(hit.id);
                ASSERT_EQ(hit.pos, data[static_cast<std::size_t>(
                                            std::find_if(data.begin(), data.end(),
                                                         [&](const RawTrajectory& t) { return t.id == hit.id; }) -
                                            data.begin())]
                                       .at(sn.timestamp()));
            }
            ASSERT_EQ(got, expected);
        }
    }
}

TEST(Index, CandidatesAreComplete) {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 20; ++round) {
        const auto data = testing::random_dataset(rng);
        const auto idx = RCTIndex::build(data, {.period = std::uniform_int_distribution<Time>(1, 30)(rng)});
        const RawStore oracle(data);
        for (int q = 0; q < 100; ++q) {
            const auto query = std::get<TimeSliceQuery>(testing::random_query(rng, data, 2));
            const auto cands = idx.slice_candidates(query.region, query.t);
            for (const auto& hit : oracle.time_slice(query.region, query.t)) {
                ASSERT_TRUE(std::binary_search(cands.begin(), cands.end(), hit.id));
            }
        }
    }
}

TEST(Index, DisjointBoxesNeverHideHits) {
    std::mt19937_64 rng(47);
    for (int round = 0; round < 20; ++round) {
        const auto data = testing::random_dataset(rng);
        const auto idx = RCTIndex::build(data);
        for (std::size_t o = 0; o < data.size(); ++o) {
            const auto& log = idx.logs()[o];
            if (log.phrase_count() == 0) {
                continue;
            }
            for (int q = 0; q < 30; ++q) {
                auto ws = std::uniform_int_distribution<std::size_t>(1, log.phrase_count())(rng);
                auto we = std::uniform_int_distribution<std::size_t>(1, log.phrase_count())(rng);
                if (ws > we) {
                    std::swap(ws, we);
                }
                const auto r = std::get<TimeSliceQuery>(testing::random_query(rng, data, 2)).region;
                const auto box = log.phrase_box(ws, we);
                bool any_inside = false;
                for (auto u = log.phrase_first(ws); u <= log.phrase_last(we); ++u) {
                    ASSERT_TRUE(box.contains(data[o].positions[u]));
                    any_inside = any_inside || r.contains(data[o].positions[u]);
                }
                if (!r.intersects(box)) {
                    ASSERT_FALSE(any_inside);
                }
                if (r.contains(box)) {
                    ASSERT_TRUE(any_inside);
                }
            }
        }
    }
}

TEST(Index, IntervalOfOneInstantEqualsSlice) {
    std::mt19937_64 rng(53);
    for (int round = 0; round < 10; ++round) {
        const auto data = testing::random_dataset(rng);
        const auto idx = RCTIndex::build(data, {.period = 7});
        for (int q = 0; q < 50; ++q) {
            const auto query = std::get<TimeSliceQuery>(testing::random_query(rng, data, 2));
            std::vector<ObjectId> ids;
            for (const auto& hit : idx.time_slice(query.region, query.t)) {
                ids.push_back(hit.id);
            }
            ASSERT_EQ(idx.time_interval(query.region, query.t, query.t), ids);
        }
    }
}

TEST(Index, WholeGridWholeTimeReportsEveryObject) {
    std::mt19937_64 rng(59);
    const auto data = testing::random_dataset(rng);
    const auto idx = RCTIndex::build(data);
    std::vector<ObjectId> all;
    for (const auto& tr : data) {
        all.push_back(tr.id);
    }
    EXPECT_EQ(idx.time_interval({0, 0, idx.grid().max_x, idx.grid().max_y}, 0, idx.last_time()), all);
}

TEST(Index, AgreesWithOracle) {
    std::mt19937_64 rng(61);
    for (int round = 0; round < 20; ++round) {
        const auto data = testing::random_dataset(rng);
        IndexConfig cfg;
        cfg.period = std::uniform_int_distribution<Time>(1, 64)(rng);
        cfg.k = round % 4 == 0 ? 3 : 2;
        cfg.block_length = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
        const auto idx = RCTIndex::build(data, cfg);
        const RawStore oracle(data);
        for (int q = 0; q < 200; ++q) {
            const auto query = testing::random_query(rng, data);
            ASSERT_EQ(idx.answer(query), oracle.answer(query)) << "round " << round << " query " << q;
        }
    }
}

} // namespace
} // namespace rct
