#pragma once

#include <rct/common.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace rct {

struct TimedPosition {
    Time t = 0;
    Position pos;

    friend constexpr auto operator<=>(const TimedPosition&, const TimedPosition&) = default;
};

struct ObjectPosition {
    ObjectId id = 0;
    Position pos;

    friend constexpr auto operator<=>(const ObjectPosition&, const ObjectPosition&) = default;
};

struct SearchObjectQuery {
    ObjectId id = 0;
    Time t = 0;
};

struct TrajectoryQuery {
    ObjectId id = 0;
    Time from = 0;
    Time to = 0;
};

struct TimeSliceQuery {
    Region region;
    Time t = 0;
};

struct TimeIntervalQuery {
    Region region;
    Time from = 0;
    Time to = 0;
};

using Query = std::variant<SearchObjectQuery, TrajectoryQuery, TimeSliceQuery, TimeIntervalQuery>;

/// nullopt from a search means the object is inactive at that instant.
using QueryResult =
    std::variant<std::optional<Position>, std::vector<TimedPosition>, std::vector<ObjectPosition>, std::vector<ObjectId>>;

} // namespace rct
