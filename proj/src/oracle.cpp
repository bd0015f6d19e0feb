#include "oar/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace oar {
namespace {

std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

LegalityReport check_legality(const RectTree& tree, std::span<const Point> pins,
                              std::span<const Rect> obstacles) {
  LegalityReport rep;
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    const Segment s = tree.segment(e);
    bool bad = !s.axis_aligned();
    for (const Rect& r : obstacles) bad = bad || seg_vs_rect(s, r) == SegRect::CrossesInterior;
    if (bad) rep.violating_edges.push_back(e);
  }
  for (NodeId i = 0; i < tree.node_count(); ++i) {
    bool bad = false;
    for (const Rect& r : obstacles) bad = bad || strictly_inside(tree.points[i], r);
    if (bad) rep.violating_nodes.push_back(i);
  }

  std::map<Point, std::uint32_t> vertex;
  for (const Point& p : tree.points) vertex.try_emplace(p, std::uint32_t(vertex.size()));
  std::vector<std::uint32_t> parent(vertex.size());
  std::iota(parent.begin(), parent.end(), 0u);
  std::size_t links = 0;
  bool cycle = false;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& e : tree.edges) {
    std::uint32_t a = vertex.at(tree.points[e.u]), b = vertex.at(tree.points[e.v]);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      cycle = true;  // parallel edges
      continue;
    }
    ++links;
    const std::uint32_t ra = find_root(parent, a), rb = find_root(parent, b);
    if (ra == rb) cycle = true;
    else parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::set<std::uint32_t> roots;
  for (std::uint32_t i = 0; i < parent.size(); ++i) roots.insert(find_root(parent, i));
  rep.connected = roots.size() <= 1;
  rep.acyclic = !cycle && (vertex.empty() || links == vertex.size() - roots.size());

  rep.spans_pins = true;
  std::optional<std::uint32_t> root;
  for (const Point& p : pins) {
    auto it = vertex.find(p);
    if (it == vertex.end()) {
      rep.spans_pins = false;
      break;
    }
    const std::uint32_t r = find_root(parent, it->second);
    if (root && *root != r) rep.spans_pins = false;
    root = r;
  }
  return rep;
}

std::vector<ObstacleId> NaiveQueries::crossing_obstacles(const Segment& s) const {
  std::vector<std::pair<Coord, ObstacleId>> hits;
  const bool h = s.horizontal();
  const bool forward = h ? s.a.x <= s.b.x : s.a.y <= s.b.y;
  for (ObstacleId i = 0; i < obstacles_.size(); ++i) {
    if (seg_vs_rect(s, obstacles_[i]) != SegRect::CrossesInterior) continue;
    const Rect& r = obstacles_[i];
    const Coord key = h ? (forward ? r.lo.x : -r.hi.x) : (forward ? r.lo.y : -r.hi.y);
    hits.emplace_back(key, i);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<ObstacleId> out;
  for (const auto& [k, id] : hits) out.push_back(id);
  return out;
}

std::optional<Blocking> NaiveQueries::first_blocking(const Ray& ray, Coord stop) const {
  const auto seg = ray_extent(ray, stop);
  if (!seg) return std::nullopt;
  const auto ids = crossing_obstacles(*seg);
  if (ids.empty()) return std::nullopt;
  const Rect& r = obstacles_[ids.front()];
  Segment side;
  switch (ray.dir) {
    case Dir::Down: side = {{r.lo.x, r.hi.y}, r.hi}; break;
    case Dir::Up: side = {r.lo, {r.hi.x, r.lo.y}}; break;
    case Dir::Right: side = {r.lo, {r.lo.x, r.hi.y}}; break;
    case Dir::Left: side = {{r.hi.x, r.lo.y}, r.hi}; break;
  }
  return Blocking{ids.front(), side};
}

std::vector<ObstacleId> NaiveQueries::rect_overlaps(const Rect& b) const {
  std::vector<ObstacleId> out;
  for (ObstacleId i = 0; i < obstacles_.size(); ++i) {
    const Rect& r = obstacles_[i];
    const Coord ix0 = std::max(b.lo.x, r.lo.x), ix1 = std::min(b.hi.x, r.hi.x);
    const Coord iy0 = std::max(b.lo.y, r.lo.y), iy1 = std::min(b.hi.y, r.hi.y);
    if (ix0 > ix1 || iy0 > iy1) continue;
    // The closed intersection must contain a point of r's open interior.
    const bool x_ok = ix0 < ix1 || (ix0 > r.lo.x && ix0 < r.hi.x);
    const bool y_ok = iy0 < iy1 || (iy0 > r.lo.y && iy0 < r.hi.y);
    if (x_ok && y_ok) out.push_back(i);
  }
  return out;
}

std::optional<ObstacleId> NaiveQueries::containing(Point p) const {
  for (ObstacleId i = 0; i < obstacles_.size(); ++i)
    if (point_in_rect(p, obstacles_[i]) == PointRect::Interior) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact OARSMT

OptimalTree optimal_oarsmt(std::span<const Point> pins, std::span<const Rect> obstacles, const Rect& bound) {
  const std::size_t k = pins.size();
  if (k > kOracleMaxPins) throw TooLarge("oracle supports at most 8 pins");
  if (k == 0) return {};

  std::vector<Coord> xs{bound.lo.x, bound.hi.x}, ys{bound.lo.y, bound.hi.y};
  for (const Point& p : pins) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  for (const Rect& r : obstacles) {
    xs.insert(xs.end(), {r.lo.x, r.hi.x});
    ys.insert(ys.end(), {r.lo.y, r.hi.y});
  }
  const auto clip = [](std::vector<Coord>& v, Coord lo, Coord hi) {
    std::erase_if(v, [&](Coord c) { return c < lo || c > hi; });
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  clip(xs, bound.lo.x, bound.hi.x);
  clip(ys, bound.lo.y, bound.hi.y);
  if (xs.size() > kOracleMaxGrid || ys.size() > kOracleMaxGrid) throw TooLarge("oracle grid exceeds 32x32");

  const std::size_t nx = xs.size(), ny = ys.size(), nv = nx * ny;
  const auto point_of = [&](std::size_t v) { return Point{xs[v % nx], ys[v / nx]}; };
  const auto vertex_of = [&](Point p) {
    const auto i = std::size_t(std::lower_bound(xs.begin(), xs.end(), p.x) - xs.begin());
    const auto j = std::size_t(std::lower_bound(ys.begin(), ys.end(), p.y) - ys.begin());
    return j * nx + i;
  };
  const auto blocked_point = [&](Point p) {
    for (const Rect& r : obstacles)
      if (strictly_inside(p, r)) return true;
    return false;
  };
  const auto blocked_seg = [&](Point a, Point b) {
    for (const Rect& r : obstacles)
      if (seg_vs_rect({a, b}, r) == SegRect::CrossesInterior) return true;
    return false;
  };

  std::vector<std::vector<std::pair<std::size_t, Length>>> adj(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    if (blocked_point(point_of(v))) continue;
    const std::size_t i = v % nx, j = v / nx;
    if (i + 1 < nx && !blocked_point(point_of(v + 1)) && !blocked_seg(point_of(v), point_of(v + 1))) {
      const Length w = Length{xs[i + 1]} - xs[i];
      adj[v].push_back({v + 1, w});
      adj[v + 1].push_back({v, w});
    }
    if (j + 1 < ny && !blocked_point(point_of(v + nx)) && !blocked_seg(point_of(v), point_of(v + nx))) {
      const Length w = Length{ys[j + 1]} - ys[j];
      adj[v].push_back({v + nx, w});
      adj[v + nx].push_back({v, w});
    }
  }

  constexpr Length kInf = std::numeric_limits<Length>::max() / 4;
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<std::vector<Length>> dp(full + 1, std::vector<Length>(nv, kInf));
  // Back-pointers: split subset (>0) or predecessor vertex for the path step.
  struct Back {
    std::size_t split = 0;
    std::size_t pred = std::size_t(-1);
  };
  std::vector<std::vector<Back>> back(full + 1, std::vector<Back>(nv));

  const auto relax = [&](std::size_t mask) {
    using Item = std::pair<Length, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t v = 0; v < nv; ++v)
      if (dp[mask][v] < kInf) pq.push({dp[mask][v], v});
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (d != dp[mask][v]) continue;
      for (const auto& [u, w] : adj[v]) {
        if (d + w < dp[mask][u]) {
          dp[mask][u] = d + w;
          back[mask][u] = {0, v};
          pq.push({dp[mask][u], u});
        }
      }
    }
  };

  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t v = vertex_of(pins[t]);
    dp[std::size_t{1} << t][v] = 0;
    relax(std::size_t{1} << t);
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;
    const std::size_t low = mask & (~mask + 1);
    for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;  // each unordered split once
      const std::size_t rest = mask ^ sub;
      for (std::size_t v = 0; v < nv; ++v) {
        const Length c = dp[sub][v] + dp[rest][v];
        if (c < dp[mask][v]) {
          dp[mask][v] = c;
          back[mask][v] = {sub, std::size_t(-1)};
        }
      }
    }
    relax(mask);
  }

  const std::size_t root = vertex_of(pins[0]);
  if (dp[full][root] >= kInf) throw std::runtime_error("pins cannot be connected inside the bound");

  std::set<std::pair<std::size_t, std::size_t>> grid_edges;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{full, root}};
  while (!stack.empty()) {
    const auto [mask, v] = stack.back();
    stack.pop_back();
    const Back& b = back[mask][v];
    if (b.pred != std::size_t(-1)) {
      grid_edges.insert({std::min(v, b.pred), std::max(v, b.pred)});
      stack.push_back({mask, b.pred});
    } else if (b.split != 0) {
      stack.push_back({b.split, v});
      stack.push_back({mask ^ b.split, v});
    }
  }

  OptimalTree out;
  out.wirelength = dp[full][root];
  std::map<std::size_t, NodeId> ids;
  for (const Point& p : pins) ids.emplace(vertex_of(p), out.tree.add_node(p, NodeRole::Pin));
  const auto node = [&](std::size_t v) {
    auto [it, fresh] = ids.try_emplace(v, 0);
    if (fresh) it->second = out.tree.add_node(point_of(v), NodeRole::Corner);
    return it->second;
  };
  for (const auto& [a, b] : grid_edges) out.tree.add_edge(node(a), node(b));
  return out;
}

}  // namespace oar
