#pragma once

// Obstacle-oblivious rectilinear Steiner tree seeds and their L-shaped
// embedding. The generator is swappable through SeedGenerator.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oar/geometry.hpp"
#include "oar/rect_tree.hpp"

namespace oar {

struct Topology {
  std::vector<Point> nodes;     // pins first, in input order, then Steiner points
  std::vector<NodeRole> roles;  // Pin or Steiner
  std::vector<std::pair<NodeId, NodeId>> links;

  Length wirelength() const;
};

enum class SeedMode : std::uint8_t {
  Auto,        // ExactSmall up to kAutoExactMaxPins pins, else Heuristic
  ExactSmall,  // Hanan-grid enumeration, at most kExactMaxPins pins
  Heuristic,   // iterated 1-Steiner from a rectilinear MST
};

inline constexpr std::size_t kExactMaxPins = 6;
// Six-pin enumeration costs ~10 ms, too slow to run per net by default.
inline constexpr std::size_t kAutoExactMaxPins = 5;

class TooManyPinsForExact : public std::invalid_argument {
 public:
  explicit TooManyPinsForExact(std::size_t m)
      : std::invalid_argument("exact seed supports at most 6 pins, got " + std::to_string(m)) {}
};

using SeedGenerator = std::function<Topology(std::span<const Point>)>;

/// Rectilinear minimum spanning tree over `pins` (Prim, ties by index).
Topology rectilinear_mst(std::span<const Point> pins);

/// Requires >= 2 pairwise distinct pins.
Topology seed_topology(std::span<const Point> pins, SeedMode mode = SeedMode::Auto);

/// Embeds each link as a straight segment or an L-shape whose corner side is
/// drawn from a PRNG seeded with `seed`.
RectTree rectilinearize(const Topology& t, std::uint64_t seed);

}  // namespace oar
