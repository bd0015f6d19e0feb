#include "oar/edge_update.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace oar {
namespace {

Dir direction(Point from, Point to) {
  if (from.y == to.y) return to.x > from.x ? Dir::Right : Dir::Left;
  return to.y > from.y ? Dir::Up : Dir::Down;
}

// Products of two coordinate differences need 65 bits.
__extension__ using Wide = __int128;

// |cross| is proportional to the perpendicular distance with a common factor
// for a fixed line, so comparing it is exact.
Wide line_offset(Point c, const Line& l) {
  const Wide dx = Wide{l.q.x} - l.p.x;
  const Wide dy = Wide{l.q.y} - l.p.y;
  const Wide cross = dx * (Wide{c.y} - l.p.y) - dy * (Wide{c.x} - l.p.x);
  return cross < 0 ? -cross : cross;
}

}  // namespace

Length EdgeUpdateResult::wirelength() const {
  Length total = 0;
  for (const Segment& s : edges) total += s.length();
  return total;
}

EdgeUpdateResult edge_update(const EdgeUpdateRequest& req, const ObstacleList& s_b) {
  if (req.n_s == req.n_t || !Segment{req.n_s, req.n_t}.axis_aligned())
    throw std::invalid_argument("edge_update needs an axis-aligned, non-degenerate edge");
  if (s_b.containing(req.n_s)) throw SourceInsideObstacle();

  const Dir rdir = direction(req.n_s, req.n_t);
  const bool horizontal = is_horizontal(rdir);
  const Coord stop = horizontal ? req.n_t.x : req.n_t.y;
  const std::size_t limit = bend_limit(s_b.size());

  EdgeUpdateResult out;
  Point cur = req.n_s;
  for (std::size_t bends = 0;; ++bends) {
    if (bends > limit) {
      out.status = UpdateStatus::Aborted;
      return out;
    }
    const auto hit = s_b.first_blocking({cur, rdir}, stop);
    if (!hit) {
      const Point end = horizontal ? Point{req.n_t.x, cur.y} : Point{cur.x, req.n_t.y};
      out.edges.push_back({cur, end});
      out.edges.push_back({end, req.n_t});
      out.status = UpdateStatus::Complete;
      return out;
    }
    const Point c0 = hit->boundary.a;
    const Point c1 = hit->boundary.b;
    const Point end = horizontal ? Point{c0.x, cur.y} : Point{cur.x, c0.y};
    out.edges.push_back({cur, end});
    // Ties go to c0, the lexicographically smaller corner.
    const Point corner = line_offset(c1, req.l_r) < line_offset(c0, req.l_r) ? c1 : c0;
    out.edges.push_back({end, corner});
    cur = corner;
  }
}

// ---------------------------------------------------------------------------
// Node legalization

namespace {

// Counter-clockwise perimeter coordinate starting at r.lo.
Length perimeter_pos(const Rect& r, Point p) {
  const Length w = r.width(), h = r.height();
  if (p.y == r.lo.y) return Length{p.x} - r.lo.x;
  if (p.x == r.hi.x) return w + (Length{p.y} - r.lo.y);
  if (p.y == r.hi.y) return w + h + (Length{r.hi.x} - p.x);
  assert(p.x == r.lo.x);
  return 2 * w + h + (Length{r.hi.y} - p.y);
}

}  // namespace

std::vector<Point> perimeter_connector(const Rect& r, std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return pts;

  const Length perimeter = 2 * (Length{r.width()} + r.height());
  std::vector<std::pair<Length, Point>> along;
  for (const Point& p : pts) along.emplace_back(perimeter_pos(r, p), p);
  std::sort(along.begin(), along.end());

  // Longest gap between cyclically consecutive points; the first one on ties.
  std::size_t gap_end = 0;
  Length longest = -1;
  for (std::size_t i = 0; i < along.size(); ++i) {
    const std::size_t prev = (i + along.size() - 1) % along.size();
    Length g = along[i].first - along[prev].first;
    if (g <= 0) g += perimeter;
    if (g > longest) {
      longest = g;
      gap_end = i;
    }
  }

  const std::pair<Length, Point> corners[4] = {
      {0, r.lo},
      {r.width(), {r.hi.x, r.lo.y}},
      {Length{r.width()} + r.height(), r.hi},
      {2 * Length{r.width()} + r.height(), {r.lo.x, r.hi.y}},
  };

  std::vector<Point> chain;
  for (std::size_t k = 0; k < along.size(); ++k) {
    const auto& [t, p] = along[(gap_end + k) % along.size()];
    chain.push_back(p);
    if (k + 1 == along.size()) break;
    const Length t_next = along[(gap_end + k + 1) % along.size()].first;
    // Corners strictly between t and t_next going counter-clockwise.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& [tc, c] : corners) {
        const Length tc_shift = tc + pass * perimeter;
        const Length tn = t_next > t ? t_next : t_next + perimeter;
        if (tc_shift > t && tc_shift < tn) chain.push_back(c);
      }
    }
  }
  return chain;
}

RectTree legalize_nodes(const RectTree& tree, const RangeIndex& idx, std::size_t* added_edges) {
  const std::size_t n = tree.node_count();
  std::vector<std::optional<ObstacleId>> inside(n);
  bool any = false;
  for (NodeId i = 0; i < n; ++i) {
    inside[i] = idx.containing(tree.points[i]);
    any = any || inside[i].has_value();
  }
  if (added_edges) *added_edges = 0;
  if (!any) return tree;

  RectTree out;
  std::vector<NodeId> remap(n, 0);
  for (NodeId i = 0; i < n; ++i)
    if (!inside[i]) remap[i] = out.add_node(tree.points[i], tree.roles[i]);

  // Crossings reuse any surviving node already at that point.
  std::map<Point, NodeId> at_point;
  for (NodeId i = 0; i < n; ++i)
    if (!inside[i]) at_point.try_emplace(tree.points[i], remap[i]);
  std::map<ObstacleId, std::vector<Point>> crossings;
  const auto boundary_node = [&](Point p) {
    auto [it, fresh] = at_point.try_emplace(p, 0);
    if (fresh) it->second = out.add_node(p, NodeRole::Corner);
    return it->second;
  };
  // Where the segment from `from` (inside r) towards `to` leaves r.
  const auto exit_point = [](const Rect& r, Point from, Point to) -> Point {
    switch (direction(from, to)) {
      case Dir::Right: return {r.hi.x, from.y};
      case Dir::Left: return {r.lo.x, from.y};
      case Dir::Up: return {from.x, r.hi.y};
      case Dir::Down: break;
    }
    return {from.x, r.lo.y};
  };

  for (const RectTree::Edge& e : tree.edges) {
    const auto bu = inside[e.u];
    const auto bv = inside[e.v];
    if (!bu && !bv) {
      out.add_edge(remap[e.u], remap[e.v]);
      continue;
    }
    if (bu && bv && *bu == *bv) continue;
    const Point pu = tree.points[e.u];
    const Point pv = tree.points[e.v];
    if (pu == pv) continue;

    NodeId a, b;
    if (bu) {
      const Point x = exit_point(idx.obstacle(*bu), pu, pv);
      crossings[*bu].push_back(x);
      a = boundary_node(x);
    } else {
      a = remap[e.u];
    }
    if (bv) {
      const Point x = exit_point(idx.obstacle(*bv), pv, pu);
      crossings[*bv].push_back(x);
      b = boundary_node(x);
    } else {
      b = remap[e.v];
    }
    if (a != b) out.add_edge(a, b);
  }

  std::vector<ObstacleId> occupied;
  for (NodeId i = 0; i < n; ++i)
    if (inside[i]) occupied.push_back(*inside[i]);
  std::sort(occupied.begin(), occupied.end());
  occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());

  std::size_t added = 0;
  for (ObstacleId b : occupied) {
    auto it = crossings.find(b);
    if (it == crossings.end()) throw DisconnectedIntersections(b);
    const std::vector<Point> chain = perimeter_connector(idx.obstacle(b), it->second);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      out.add_edge(boundary_node(chain[k]), boundary_node(chain[k + 1]));
      ++added;
    }
  }
  if (added_edges) *added_edges = added;
  return out;
}

}  // namespace oar
