#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oar/geometry.hpp"

namespace oar {

using NodeId = std::uint32_t;

enum class NodeRole : std::uint8_t { Pin, Steiner, Corner };

const char* role_name(NodeRole r);

/// A rectilinear tree: nodes with roles and axis-aligned edges between them.
/// Edge geometry is implied by the endpoint positions.
struct RectTree {
  struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  std::vector<Point> points;
  std::vector<NodeRole> roles;
  std::vector<Edge> edges;

  NodeId add_node(Point p, NodeRole role) {
    points.push_back(p);
    roles.push_back(role);
    return static_cast<NodeId>(points.size() - 1);
  }
  void add_edge(NodeId u, NodeId v) { edges.push_back({u, v}); }

  std::size_t node_count() const { return points.size(); }
  Segment segment(std::size_t e) const { return {points[edges[e].u], points[edges[e].v]}; }
  std::vector<Segment> segments() const;
  Length wirelength() const;
  std::vector<std::uint32_t> degrees() const;

  friend bool operator==(const RectTree&, const RectTree&) = default;
};

/// Total length of the union of axis-aligned segments (overlaps counted once).
Length union_length(std::span<const Segment> segs);

}  // namespace oar
