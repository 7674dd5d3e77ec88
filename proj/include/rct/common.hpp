#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rct {

using ObjectId = std::uint64_t;
using Time = std::int64_t;
using Coord = std::int64_t;

/// Raised when ingested data violates the dataset contract (gaps, duplicates, out-of-grid points).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a serialized index cannot be decoded.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-timestamp displacement of one object.
struct Movement {
    Coord dx = 0;
    Coord dy = 0;

    constexpr Movement& operator+=(const Movement& o) {
        dx += o.dx;
        dy += o.dy;
        return *this;
    }
    friend constexpr Movement operator+(Movement a, const Movement& b) { return a += b; }
    friend constexpr Movement operator-(const Movement& a, const Movement& b) {
        return {a.dx - b.dx, a.dy - b.dy};
    }
    friend constexpr auto operator<=>(const Movement&, const Movement&) = default;
};

using MovementSequence = std::vector<Movement>;

struct Position {
    Coord x = 0;
    Coord y = 0;

    friend constexpr Position operator+(const Position& p, const Movement& m) {
        return {p.x + m.dx, p.y + m.dy};
    }
    friend constexpr Movement operator-(const Position& a, const Position& b) {
        return {a.x - b.x, a.y - b.y};
    }
    friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Position& p) {
    return os << '(' << p.x << ',' << p.y << ')';
}

inline std::ostream& operator<<(std::ostream& os, const Movement& m) {
    return os << '<' << m.dx << ',' << m.dy << '>';
}

/// Closed axis-aligned rectangle [x1,x2] x [y1,y2].
struct Region {
    Coord x1 = 0;
    Coord y1 = 0;
    Coord x2 = 0;
    Coord y2 = 0;

    constexpr bool valid() const { return x1 <= x2 && y1 <= y2; }

    constexpr bool contains(const Position& p) const {
        return x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2;
    }

    constexpr bool contains(const Region& o) const {
        return x1 <= o.x1 && o.x2 <= x2 && y1 <= o.y1 && o.y2 <= y2;
    }

    constexpr bool intersects(const Region& o) const {
        return x1 <= o.x2 && o.x1 <= x2 && y1 <= o.y2 && o.y1 <= y2;
    }

    constexpr Region expanded(Coord by) const { return {x1 - by, y1 - by, x2 + by, y2 + by}; }

    friend constexpr bool operator==(const Region&, const Region&) = default;
};

inline void check_region(const Region& r) {
    if (!r.valid()) {
        throw std::invalid_argument("malformed region: requires x1 <= x2 and y1 <= y2");
    }
}

/// Bounding box of a movement range, relative to the position right before the range.
struct RelativeBox {
    Coord x_min = 0;
    Coord y_min = 0;
    Coord x_max = 0;
    Coord y_max = 0;

    constexpr Region at(const Position& origin) const {
        return {origin.x + x_min, origin.y + y_min, origin.x + x_max, origin.y + y_max};
    }

    friend constexpr bool operator==(const RelativeBox&, const RelativeBox&) = default;
};

/// A non-negative rational, used so that configuration stays integer-only on disk.
struct Fraction {
    std::uint64_t num = 1;
    std::uint64_t den = 10;

    /// ceil(num / den * n)
    constexpr std::uint64_t ceil_of(std::uint64_t n) const { return (num * n + den - 1) / den; }

    friend constexpr bool operator==(const Fraction&, const Fraction&) = default;
};

} // namespace rct
