#pragma once

// Independent reference implementations: exhaustive legality checking, naive
// O(n) geometry queries, and an exact obstacle-avoiding Steiner tree for
// small instances. None of these share code with the fast paths they check.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "oar/geometry.hpp"
#include "oar/obstacle_index.hpp"
#include "oar/rect_tree.hpp"

namespace oar {

struct LegalityReport {
  std::vector<std::size_t> violating_edges;
  std::vector<NodeId> violating_nodes;
  bool connected = false;
  bool acyclic = false;
  bool spans_pins = false;

  bool legal() const {
    return violating_edges.empty() && violating_nodes.empty() && connected && acyclic && spans_pins;
  }
};

/// Nodes at the same point are identified before the structural checks.
LegalityReport check_legality(const RectTree& tree, std::span<const Point> pins,
                              std::span<const Rect> obstacles);

class NaiveQueries {
 public:
  explicit NaiveQueries(std::span<const Rect> obstacles) : obstacles_(obstacles.begin(), obstacles.end()) {}

  std::vector<ObstacleId> crossing_obstacles(const Segment& s) const;
  std::optional<Blocking> first_blocking(const Ray& ray, Coord stop) const;
  std::vector<ObstacleId> rect_overlaps(const Rect& b) const;
  std::optional<ObstacleId> containing(Point p) const;

 private:
  std::vector<Rect> obstacles_;
};

inline constexpr std::size_t kOracleMaxPins = 8;
inline constexpr std::size_t kOracleMaxGrid = 32;

class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OptimalTree {
  Length wirelength = 0;
  RectTree tree;
};

/// Exact minimum obstacle-avoiding rectilinear Steiner tree restricted to
/// `bound`, by Dreyfus-Wagner over the grid of pin, obstacle and bound
/// coordinates. Throws TooLarge beyond 8 pins or a 32x32 grid, and
/// std::runtime_error when the pins cannot be connected.
OptimalTree optimal_oarsmt(std::span<const Point> pins, std::span<const Rect> obstacles, const Rect& bound);

}  // namespace oar
