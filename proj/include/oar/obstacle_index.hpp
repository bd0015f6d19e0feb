#pragma once

// Sorted per-row / per-column obstacle interval lists ("range lists"), the
// static replacement for an R-tree. Obstacles are fixed and interior-disjoint,
// so every horizontal line meets a set of pairwise-disjoint x-intervals that
// can be binary searched.
//
// Rows are kept for every distinct obstacle boundary y and for every open band
// between consecutive boundaries. The band lists play the role of the
// obstacle-center grid lines: any y strictly inside a band sees the same
// obstacles as the center line of that band, so queries at arbitrary (non-Hanan)
// coordinates are answered exactly.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "oar/geometry.hpp"
#include "oar/kernels.hpp"

namespace oar {

using ObstacleId = std::uint32_t;

struct RangePair {
  Coord lo = 0;
  Coord hi = 0;
  ObstacleId id = 0;

  friend bool operator==(const RangePair&, const RangePair&) = default;
};

/// Result of a blocking query: which obstacle, and the side of it the ray hits
/// first (endpoint `a` is the lexicographically smaller corner).
struct Blocking {
  ObstacleId id = 0;
  Segment boundary;

  friend bool operator==(const Blocking&, const Blocking&) = default;
};

class OverlappingObstacles : public std::invalid_argument {
 public:
  OverlappingObstacles(ObstacleId a, ObstacleId b)
      : std::invalid_argument("obstacles " + std::to_string(a) + " and " + std::to_string(b) +
                              " have overlapping interiors"),
        first(a),
        second(b) {}
  ObstacleId first;
  ObstacleId second;
};

/// The side of `r` a ray travelling in `dir` enters through.
Segment entry_side(const Rect& r, Dir dir);

/// The finite segment covered by `ray` up to the axis coordinate `stop`, or
/// nullopt when `stop` lies behind the origin.
std::optional<Segment> ray_extent(const Ray& ray, Coord stop);

class RangeIndex {
 public:
  RangeIndex() = default;

  /// Throws OverlappingObstacles, or std::invalid_argument for a zero-area
  /// obstacle. `extra` points (usually pins) only contribute grid coordinates.
  static RangeIndex build(std::span<const Rect> obstacles, std::span<const Point> extra = {});

  std::size_t size() const { return obstacles_.size(); }
  bool empty() const { return obstacles_.empty(); }
  std::span<const Rect> obstacles() const { return obstacles_; }
  const Rect& obstacle(ObstacleId id) const { return obstacles_[id]; }

  /// Range list of the horizontal line at `y` (resp. vertical line at `x`).
  std::span<const RangePair> row(Coord y) const { return rows_.at(y); }
  std::span<const RangePair> col(Coord x) const { return cols_.at(x); }

  /// Extended Hanan grid: obstacle boundaries, obstacle centers, extra points.
  const std::vector<Coord>& grid_xs() const { return grid_xs_; }
  const std::vector<Coord>& grid_ys() const { return grid_ys_; }

  /// Obstacles whose interior `s` enters, ordered from s.a to s.b.
  std::vector<ObstacleId> crossing_obstacles(const Segment& s) const;
  bool crosses_any(const Segment& s) const;

  std::optional<Blocking> first_blocking(const Ray& ray, Coord stop) const;

  /// Obstacles whose interior meets the closed box `b`, ascending id order.
  std::vector<ObstacleId> rect_overlaps(const Rect& b) const;

  /// The obstacle with `p` strictly inside, if any.
  std::optional<ObstacleId> containing(Point p) const;

  friend bool operator==(const RangeIndex&, const RangeIndex&) = default;

 private:
  // One axis worth of range lists in compressed-row storage. Slot 2i is the
  // line exactly at keys[i]; slot 2i+1 is the open band (keys[i], keys[i+1]).
  struct Axis {
    std::vector<Coord> keys;
    std::vector<std::uint32_t> offsets;  // size slots+1
    std::vector<RangePair> pairs;

    std::size_t slots() const { return keys.empty() ? 0 : 2 * keys.size() - 1; }
    std::optional<std::size_t> slot_of(Coord c) const;
    // Inclusive slot range meeting the closed interval [lo, hi].
    std::optional<std::pair<std::size_t, std::size_t>> slot_range(Coord lo, Coord hi) const;
    std::span<const RangePair> slot(std::size_t s) const {
      return {pairs.data() + offsets[s], pairs.data() + offsets[s + 1]};
    }
    std::span<const RangePair> at(Coord c) const;

    friend bool operator==(const Axis&, const Axis&) = default;
  };

  static Axis build_axis(std::span<const Rect> obstacles, bool rows);
  static void check_disjoint(const Axis& axis);
  // Appends ids of pairs in `list` whose open extent meets [lo, hi].
  static void collect(std::span<const RangePair> list, Coord lo, Coord hi,
                      std::vector<ObstacleId>& out);

  std::vector<Rect> obstacles_;
  Axis rows_;
  Axis cols_;
  std::vector<Coord> grid_xs_;
  std::vector<Coord> grid_ys_;
};

/// A small, possibly ad-hoc obstacle set scanned linearly with the SIMD
/// interior-contact kernel. Used for the per-edge candidate and merged
/// obstacle sets, which are not worth indexing.
class ObstacleList {
 public:
  ObstacleList() = default;
  explicit ObstacleList(std::vector<Rect> rects) : rects_(std::move(rects)), soa_(rects_) {}

  std::size_t size() const { return rects_.size(); }
  bool empty() const { return rects_.empty(); }
  std::span<const Rect> rects() const { return rects_; }
  const Rect& operator[](std::size_t i) const { return rects_[i]; }

  std::vector<ObstacleId> crossing_obstacles(const Segment& s) const;
  std::optional<Blocking> first_blocking(const Ray& ray, Coord stop) const;
  std::optional<ObstacleId> containing(Point p) const;

 private:
  std::vector<Rect> rects_;
  kernels::RectSoA soa_;
};

}  // namespace oar
