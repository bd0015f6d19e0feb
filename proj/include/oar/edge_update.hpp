#pragma once

// Extend-and-bend repair of a single edge against obstacles, steered by a
// reference line, and the node legalization that runs before it.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oar/geometry.hpp"
#include "oar/obstacle_index.hpp"
#include "oar/rect_tree.hpp"

namespace oar {

struct EdgeUpdateRequest {
  Point n_s;  // source
  Point n_t;  // target; n_s -> n_t must be axis-aligned and non-degenerate
  Line l_r;   // reference line
};

enum class UpdateStatus : std::uint8_t { Complete, Aborted };

struct EdgeUpdateResult {
  std::vector<Segment> edges;  // chained, starting at n_s; zero-length pieces are kept
  UpdateStatus status = UpdateStatus::Complete;

  Length wirelength() const;
};

class SourceInsideObstacle : public std::invalid_argument {
 public:
  SourceInsideObstacle() : std::invalid_argument("edge_update source lies inside an obstacle") {}
};

/// Bend budget before giving up: four corners per obstacle plus slack.
constexpr std::size_t bend_limit(std::size_t obstacles) { return 4 * obstacles + 8; }

EdgeUpdateResult edge_update(const EdgeUpdateRequest& req, const ObstacleList& s_b);

class DisconnectedIntersections : public std::logic_error {
 public:
  explicit DisconnectedIntersections(ObstacleId id)
      : std::logic_error("tree nodes inside obstacle " + std::to_string(id) +
                         " have no edge leaving it") {}
};

/// Moves every node that lies strictly inside an obstacle out to the
/// obstacle's boundary: inside edge parts are dropped and the boundary
/// crossings are reconnected along the shortest perimeter path. Returns the
/// number of boundary edges added through `added_edges` when non-null.
RectTree legalize_nodes(const RectTree& tree, const RangeIndex& idx,
                        std::size_t* added_edges = nullptr);

/// Shortest set of boundary pieces of `r` connecting `pts` (all on r's
/// boundary): the perimeter minus its longest gap between cyclically
/// consecutive points. Returned as a chain of points along the perimeter.
std::vector<Point> perimeter_connector(const Rect& r, std::vector<Point> pts);

}  // namespace oar
