#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>

namespace oar {

/// Integer layout coordinate (grid units).
using Coord = std::int32_t;
/// Wirelength accumulator; sums of many coordinates overflow 32 bits.
using Length = std::int64_t;

struct Point {
  Coord x = 0;
  Coord y = 0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

constexpr Length abs_diff(Coord a, Coord b) { return a < b ? Length{b} - a : Length{a} - b; }

constexpr Length manhattan(Point a, Point b) { return abs_diff(a.x, b.x) + abs_diff(a.y, b.y); }

/// Axis-aligned segment. Zero length is allowed (degenerate connector).
struct Segment {
  Point a;
  Point b;

  constexpr bool horizontal() const { return a.y == b.y; }
  constexpr bool vertical() const { return a.x == b.x; }
  constexpr bool axis_aligned() const { return horizontal() || vertical(); }
  constexpr bool degenerate() const { return a == b; }
  constexpr Length length() const { return manhattan(a, b); }

  friend constexpr bool operator==(const Segment&, const Segment&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Segment& s) {
  return os << s.a << "->" << s.b;
}

enum class Dir : std::uint8_t { Left, Right, Up, Down };

constexpr bool is_horizontal(Dir d) { return d == Dir::Left || d == Dir::Right; }
constexpr bool is_positive(Dir d) { return d == Dir::Right || d == Dir::Up; }

struct Ray {
  Point origin;
  Dir dir = Dir::Right;
};

/// Closed axis-aligned rectangle; obstacles additionally have positive area.
struct Rect {
  Point lo;
  Point hi;

  constexpr Coord width() const { return hi.x - lo.x; }
  constexpr Coord height() const { return hi.y - lo.y; }
  constexpr Length area() const { return Length{width()} * height(); }
  constexpr bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  constexpr bool has_area() const { return lo.x < hi.x && lo.y < hi.y; }

  static constexpr Rect spanning(Point p, Point q) {
    return {{std::min(p.x, q.x), std::min(p.y, q.y)},
            {std::max(p.x, q.x), std::max(p.y, q.y)}};
  }
  static constexpr Rect of(const Segment& s) { return spanning(s.a, s.b); }

  constexpr Rect united(const Rect& o) const {
    return {{std::min(lo.x, o.lo.x), std::min(lo.y, o.lo.y)},
            {std::max(hi.x, o.hi.x), std::max(hi.y, o.hi.y)}};
  }
  constexpr Rect united(Point p) const { return united(Rect{p, p}); }

  friend constexpr bool operator==(const Rect&, const Rect&) = default;
  friend constexpr auto operator<=>(const Rect&, const Rect&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rect& r) {
  return os << '[' << r.lo << ',' << r.hi << ']';
}

/// Infinite line through two distinct points; may be sloped.
struct Line {
  Point p;
  Point q;
};

enum class SegRect : std::uint8_t { Disjoint, BoundaryOnly, CrossesInterior };
enum class PointRect : std::uint8_t { Outside, OnBoundary, Interior };

/// True iff the closed box `b` meets the open interior of `r`. A segment or a
/// point is passed as its (degenerate) bounding box. This is the single
/// blocking predicate used throughout: boundaries are always legal.
constexpr bool touches_interior(const Rect& b, const Rect& r) {
  return r.lo.x < b.hi.x && b.lo.x < r.hi.x && r.lo.y < b.hi.y && b.lo.y < r.hi.y;
}

constexpr SegRect seg_vs_rect(const Segment& s, const Rect& r) {
  const Rect b = Rect::of(s);
  if (touches_interior(b, r)) return SegRect::CrossesInterior;
  const bool closed = r.lo.x <= b.hi.x && b.lo.x <= r.hi.x && r.lo.y <= b.hi.y &&
                      b.lo.y <= r.hi.y;
  return closed ? SegRect::BoundaryOnly : SegRect::Disjoint;
}

constexpr PointRect point_in_rect(Point p, const Rect& r) {
  if (p.x < r.lo.x || p.x > r.hi.x || p.y < r.lo.y || p.y > r.hi.y) return PointRect::Outside;
  if (p.x > r.lo.x && p.x < r.hi.x && p.y > r.lo.y && p.y < r.hi.y) return PointRect::Interior;
  return PointRect::OnBoundary;
}

constexpr bool strictly_inside(Point p, const Rect& r) {
  return point_in_rect(p, r) == PointRect::Interior;
}

/// Perpendicular Euclidean distance from `c` to the infinite line `l`.
double dist_point_line(Point c, const Line& l);

}  // namespace oar

template <>
struct std::hash<oar::Point> {
  std::size_t operator()(const oar::Point& p) const noexcept {
    const auto ux = static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x));
    const auto uy = static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.y));
    std::uint64_t h = (ux << 32) | uy;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};
