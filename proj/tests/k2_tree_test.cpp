#include <rct/k2_tree.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

namespace rct {
namespace {

std::vector<SnapshotPoint> naive_filter(const std::vector<SnapshotPoint>& pts, const Region& r) {
    std::vector<SnapshotPoint> out;
    for (const auto& p : pts) {
        if (r.contains(p.pos)) {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SnapshotPoint> random_points(std::mt19937_64& rng, std::size_t n, Coord max_x, Coord max_y) {
    std::vector<SnapshotPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({i * 2 + 5, {std::uniform_int_distribution<Coord>(0, max_x)(rng),
                                   std::uniform_int_distribution<Coord>(0, max_y)(rng)}});
    }
    return pts;
}

Region random_region(std::mt19937_64& rng, Coord max_x, Coord max_y) {
    auto x1 = std::uniform_int_distribution<Coord>(-2, max_x + 2)(rng);
    auto x2 = std::uniform_int_distribution<Coord>(-2, max_x + 2)(rng);
    auto y1 = std::uniform_int_distribution<Coord>(-2, max_y + 2)(rng);
    auto y2 = std::uniform_int_distribution<Coord>(-2, max_y + 2)(rng);
    return {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
}

TEST(Snapshot, EmptySnapshotReportsNothing) {
    const auto sn = Snapshot::build(0, {}, 7, 7);
    EXPECT_TRUE(sn.report_region({0, 0, 7, 7}).empty());
    EXPECT_TRUE(sn.report_region({-100, -100, 100, 100}).empty());
}

TEST(Snapshot, UniverseQuery) {
    const auto sn = Snapshot::build(0, {{1, {0, 0}}}, 3, 3, 2);
    const auto hits = sn.report_region({0, 0, 3, 3});
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].id, 1u);
    EXPECT_EQ(hits[0].pos, (Position{0, 0}));
    EXPECT_EQ(sn.side(), 4u);
}

TEST(Snapshot, ClosedBoundsAndSharedCells) {
    const auto sn = Snapshot::build(8, {{4, {2, 3}}, {9, {2, 3}}, {1, {5, 1}}}, 7, 7);
    EXPECT_TRUE(sn.report_region({6, 6, 7, 7}).empty());
    const auto corner = sn.report_region({2, 3, 4, 4});
    ASSERT_EQ(corner.size(), 2u);
    EXPECT_EQ(corner[0].id, 4u);
    EXPECT_EQ(corner[1].id, 9u);
    EXPECT_EQ(sn.cell_count(), 2u);
    EXPECT_EQ(sn.object_count(), 3u);
}

TEST(Snapshot, Errors) {
    EXPECT_THROW(Snapshot::build(0, {{1, {4, 0}}}, 3, 3), DataError);
    EXPECT_THROW(Snapshot::build(0, {{1, {0, 0}}, {1, {1, 1}}}, 3, 3), DataError);
    const auto sn = Snapshot::build(0, {{1, {0, 0}}}, 3, 3);
    EXPECT_THROW(sn.report_region({2, 0, 1, 3}), std::invalid_argument);
}

TEST(Snapshot, MatchesNaiveFilter) {
    std::mt19937_64 rng(17);
    for (int inst = 0; inst < 200; ++inst) {
        const unsigned k = inst % 3 == 0 ? 3 : 2;
        const auto max_x = std::uniform_int_distribution<Coord>(0, 300)(rng);
        const auto max_y = std::uniform_int_distribution<Coord>(0, 300)(rng);
        const auto pts = random_points(rng, 100, max_x, max_y);
        const auto sn = Snapshot::build(0, pts, max_x, max_y, k);
        for (int q = 0; q < 50; ++q) {
            const auto r = random_region(rng, max_x, max_y);
            ASSERT_EQ(sn.report_region(r), naive_filter(pts, r));
        }
    }
}

TEST(Snapshot, PartitionCoversEveryObjectOnce) {
    std::mt19937_64 rng(23);
    const auto pts = random_points(rng, 300, 127, 90);
    const auto sn = Snapshot::build(0, pts, 127, 90);
    std::multiset<ObjectId> seen;
    for (Coord x = 0; x < 128; x += 16) {
        for (Coord y = 0; y < 91; y += 13) {
            for (const auto& hit : sn.report_region({x, y, x + 15, y + 12})) {
                seen.insert(hit.id);
            }
        }
    }
    EXPECT_EQ(seen.size(), pts.size());
    EXPECT_EQ(std::set<ObjectId>(seen.begin(), seen.end()).size(), pts.size());
}

TEST(Snapshot, MonotoneInRegion) {
    std::mt19937_64 rng(29);
    const auto pts = random_points(rng, 100, 60, 60);
    const auto sn = Snapshot::build(0, pts, 60, 60);
    for (int q = 0; q < 100; ++q) {
        const auto inner = random_region(rng, 60, 60);
        const auto outer = inner.expanded(std::uniform_int_distribution<Coord>(0, 10)(rng));
        const auto a = sn.report_region(inner);
        const auto b = sn.report_region(outer);
        ASSERT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
}

TEST(Snapshot, SaveLoadKeepsAnswers) {
    std::mt19937_64 rng(31);
    const auto pts = random_points(rng, 50, 40, 70);
    const auto sn = Snapshot::build(12, pts, 40, 70, 3);
    std::stringstream ss;
    BinaryWriter w(ss);
    sn.save(w);
    BinaryReader r(ss);
    const auto back = Snapshot::load(r);
    EXPECT_EQ(back.timestamp(), 12);
    for (int q = 0; q < 50; ++q) {
        const auto reg = random_region(rng, 40, 70);
        ASSERT_EQ(back.report_region(reg), sn.report_region(reg));
    }
}

} // namespace
} // namespace rct
