#pragma once

// Rule-based obstacle-avoiding rectilinear Steiner tree generation.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "oar/edge_update.hpp"
#include "oar/geometry.hpp"
#include "oar/obstacle_index.hpp"
#include "oar/rect_tree.hpp"
#include "oar/rsmt_seed.hpp"

namespace oar {

struct OarsmtParams {
  int k_l = 5;  // hook nodes per ray segment
  int k_m = 2;  // merge granularity
  std::uint64_t seed = 0;
  int repair_depth = 16;
  bool er1 = true;
  bool er2 = true;
  bool er3 = true;
  // Rules decide greedily on local wirelength; with the guard on, the
  // rule-free tree is built too and kept when the rules ended up longer.
  bool guard_rules = true;
  SeedMode seed_mode = SeedMode::Auto;
  SeedGenerator seed_generator;  // overrides seed_mode when set
};

struct OarsmtStats {
  std::size_t initial_edges = 0;
  std::size_t legalization_edges = 0;
  std::size_t rule_updates = 0;       // update_edge_with_rules invocations
  std::size_t edge_update_calls = 0;  // Edge_Update invocations, all rule variants
  std::size_t escape_routes = 0;
  bool rules_reverted = false;
};

struct OarsmtResult {
  RectTree tree;
  OarsmtStats stats;
};

class PinInsideObstacle : public std::invalid_argument {
 public:
  PinInsideObstacle(Point p, ObstacleId id)
      : std::invalid_argument("pin (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                              ") lies inside obstacle " + std::to_string(id)) {}
};

class InfeasibleEdge : public std::runtime_error {
 public:
  InfeasibleEdge() : std::runtime_error("no obstacle-free path between edge endpoints") {}
};

struct CandidateSet {
  Rect bbox;                          // e plus every obstacle it crosses
  std::vector<ObstacleId> crossing;   // obstacles e crosses, ordered along e
  std::vector<ObstacleId> ids;        // obstacles overlapping bbox, ascending
};

CandidateSet candidate_obstacles(const Segment& e, const RangeIndex& idx);

/// Group sizes tried when merging n' successive crossing obstacles:
/// 1, ceil(n'/k_m), 2 ceil(n'/k_m), ..., clamped to n' and deduplicated.
std::vector<std::size_t> merge_group_sizes(std::size_t n_prime, int k_m);

struct MergePlan {
  std::size_t group_size = 1;
  std::vector<std::vector<ObstacleId>> groups;  // runs of successive crossing obstacles
  std::vector<Rect> merged;                     // bounding box per group
};

MergePlan merge_plan(std::span<const ObstacleId> crossing, const RangeIndex& idx, std::size_t n_m);

/// The obstacle set one merge plan produces for edge updating: merged group
/// boxes plus the untouched candidates, with overlapping boxes fused into
/// their bounding box until all are interior-disjoint.
std::vector<Rect> merged_obstacles(const MergePlan& plan, const CandidateSet& cand,
                                   const RangeIndex& idx);

/// Evenly spaced hook nodes on the ray from t in direction d, strictly
/// between t and the side of `bbox`.
std::vector<Point> hook_nodes(Point t, Dir d, const Rect& bbox, int k_l);

/// Shortest obstacle-free rectilinear path a -> b on the Hanan grid of a
/// window that grows until a path exists. Returns the path's vertices.
std::vector<Point> escape_route(Point a, Point b, const RangeIndex& idx, Rect window);

/// Planarizes, breaks cycles (minimum spanning tree on the planar graph),
/// prunes dangling non-pin branches, and merges collinear pieces.
RectTree post_process(const RectTree& tree, std::span<const Point> pins);

OarsmtResult oarsmt_generate(std::span<const Point> pins, const RangeIndex& idx,
                             const OarsmtParams& params = {});
OarsmtResult oarsmt_generate(std::span<const Point> pins, std::span<const Rect> obstacles,
                             const OarsmtParams& params = {});

}  // namespace oar
