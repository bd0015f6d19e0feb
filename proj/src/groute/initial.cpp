#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "oar/groute/route.hpp"
#include "oar/oarsmt.hpp"
#include "route_internal.hpp"

namespace oar::groute {

double logistic_overflow(std::int32_t demand, std::int32_t capacity, double slope) {
  return 1.0 / (1.0 + std::exp(-(double(demand) - double(capacity) + 0.5) / slope));
}

namespace detail {

double edge_cost(const GcellGrid& g, const std::vector<std::int32_t>& demand, EdgeId e, const CostWeights& w) {
  const double ov = g.blocked(e) ? w.alpha_ov : 0.0;
  if (g.is_via(e)) return w.via_cost + ov;
  return 1.0 + w.alpha_ow * logistic_overflow(demand[e], g.capacity(e), w.overflow_slope) + ov;
}

}  // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Obstacle GCells [lo, hi) become rectangles whose open interior holds
// exactly those cells, so routes may run along the free cells around them.
// A side on the grid border is pushed far outside, since the line just past
// the border is not a routable cell. Neighbours closer than one free cell are
// fused, and a fused box that would swallow a pin is left out; the result
// then ignores it and rip-up fixes it.
std::vector<Rect> oarsmt_obstacles(const Design& d, const Net& net) {
  Rect bbox{net.pins.front(), net.pins.front()};
  for (const Point& p : net.pins) bbox = bbox.united(p);
  const Coord far = d.grid.nx() + d.grid.ny();
  std::vector<Rect> boxes;
  for (const Rect& r : d.obstacles) {
    if (r.lo.x > bbox.hi.x || r.hi.x <= bbox.lo.x || r.lo.y > bbox.hi.y || r.hi.y <= bbox.lo.y) continue;
    boxes.push_back({{r.lo.x == 0 ? -far : r.lo.x - 1, r.lo.y == 0 ? -far : r.lo.y - 1},
                     {r.hi.x == d.grid.nx() ? d.grid.nx() + far : r.hi.x,
                      r.hi.y == d.grid.ny() ? d.grid.ny() + far : r.hi.y}});
  }
  for (std::size_t i = 0; i < boxes.size();) {
    bool fused = false;
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (!touches_interior(boxes[i], boxes[j])) continue;
      boxes[i] = boxes[i].united(boxes[j]);
      boxes.erase(boxes.begin() + std::ptrdiff_t(j));
      fused = true;
      break;
    }
    if (fused)
      i = 0;
    else
      ++i;
  }
  std::erase_if(boxes, [&](const Rect& b) {
    return std::any_of(net.pins.begin(), net.pins.end(), [&](const Point& p) { return strictly_inside(p, b); });
  });
  return boxes;
}

std::vector<Segment> net_tree(const Design& d, const Net& net, const RouteParams& params) {
  if (net.pins.size() < 2) return {};
  OarsmtParams op;
  op.seed = derive_net_seed(params.seed, net.name);
  RectTree tree;
  try {
    tree = oarsmt_generate(net.pins, oarsmt_obstacles(d, net), op).tree;
  } catch (const std::exception&) {
    tree = oarsmt_generate(net.pins, std::span<const Rect>{}, op).tree;
  }
  std::vector<Segment> out;
  const auto clamp = [&](Point p) {
    return Point{std::clamp<Coord>(p.x, 0, d.grid.nx() - 1), std::clamp<Coord>(p.y, 0, d.grid.ny() - 1)};
  };
  for (const Segment& s : tree.segments()) {
    const Segment c{clamp(s.a), clamp(s.b)};
    if (!c.degenerate()) out.push_back(c);
  }
  return out;
}

// 2D cost of one GCell step, aggregated over the layers of its direction.
class PlaneCost {
 public:
  PlaneCost(const Design& d, const std::vector<std::int32_t>& demand, const RouteParams& p)
      : d_(d), demand_(demand), p_(p) {}

  double step(Point a, Point b) const {
    const GcellGrid& g = d_.grid;
    const bool horizontal = a.y == b.y;
    const Point lo{std::min(a.x, b.x), std::min(a.y, b.y)};
    double cost = 1.0;
    if (g.cell_blocked(a.x, a.y) || g.cell_blocked(b.x, b.y)) cost += p_.weights.alpha_ov;
    if (p_.congestion_aware_patterns) {
      std::int32_t dem = 0, cap = 0;
      for (int l = 1; l < g.layers(); ++l) {
        if ((g.dir(l) == LayerDir::Horizontal) != horizontal) continue;
        const EdgeId e = g.wire(lo.x, lo.y, l);
        dem += demand_[e];
        cap += g.capacity(e);
      }
      cost += p_.weights.alpha_ow * logistic_overflow(dem, cap, p_.weights.overflow_slope);
    }
    return cost;
  }

  double path(const std::vector<Point>& pts) const {
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      Point p = pts[i];
      const Point q = pts[i + 1];
      while (p != q) {
        Point n = p;
        if (p.x != q.x)
          n.x += q.x > p.x ? 1 : -1;
        else
          n.y += q.y > p.y ? 1 : -1;
        c += step(p, n);
        p = n;
      }
    }
    return c;
  }

 private:
  const Design& d_;
  const std::vector<std::int32_t>& demand_;
  const RouteParams& p_;
};

int bends(const std::vector<Point>& pts) {
  int b = 0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const bool h1 = pts[i - 1].y == pts[i].y, h2 = pts[i].y == pts[i + 1].y;
    if (h1 != h2) ++b;
  }
  return b;
}

std::vector<Point> simplify(std::vector<Point> pts) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    if (!out.empty() && out.back() == p) continue;
    if (out.size() >= 2) {
      const Point& a = out[out.size() - 2];
      const Point& b = out.back();
      if ((a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y)) out.pop_back();
    }
    out.push_back(p);
  }
  return out;
}

// Two-pin connections: maximal paths between pins and branching nodes.
std::vector<std::vector<Point>> connections(const std::vector<Segment>& segs, const std::vector<Point>& pins) {
  std::map<std::pair<Coord, Coord>, std::vector<Point>> adj;
  const auto key = [](Point p) { return std::pair{p.x, p.y}; };
  std::set<std::pair<std::pair<Coord, Coord>, std::pair<Coord, Coord>>> seen_edges;
  for (const Segment& s : segs) {
    auto a = key(s.a), b = key(s.b);
    if (b < a) std::swap(a, b);
    if (!seen_edges.insert({a, b}).second) continue;
    adj[key(s.a)].push_back(s.b);
    adj[key(s.b)].push_back(s.a);
  }
  std::set<std::pair<Coord, Coord>> pinset;
  for (const Point& p : pins) pinset.insert(key(p));
  const auto is_key = [&](Point p) { return pinset.contains(key(p)) || adj[key(p)].size() != 2; };

  std::vector<std::vector<Point>> out;
  std::set<std::pair<std::pair<Coord, Coord>, std::pair<Coord, Coord>>> used;
  const auto mark = [&](Point a, Point b) {
    auto x = key(a), y = key(b);
    if (y < x) std::swap(x, y);
    return used.insert({x, y}).second;
  };
  std::vector<Point> starts;
  for (const auto& [k, nb] : adj)
    if (is_key({k.first, k.second})) starts.push_back({k.first, k.second});
  // A cycle of corners has no key node; start anywhere.
  if (starts.empty() && !adj.empty()) starts.push_back({adj.begin()->first.first, adj.begin()->first.second});
  for (const Point& s : starts) {
    for (const Point& first : adj[key(s)]) {
      if (!mark(s, first)) continue;
      std::vector<Point> path{s, first};
      Point prev = s, cur = first;
      while (!is_key(cur)) {
        const auto& nb = adj[key(cur)];
        const Point next = nb[0] == prev ? nb[1] : nb[0];
        if (!mark(cur, next)) break;
        path.push_back(next);
        prev = cur;
        cur = next;
      }
      out.push_back(std::move(path));
    }
  }
  return out;
}

std::vector<Point> choose_pattern(const std::vector<Point>& path, const PlaneCost& cost) {
  const std::vector<Point> original = simplify(path);
  if (bends(original) > 1 || original.size() < 2) return original;
  const Point a = original.front(), b = original.back();
  std::vector<std::vector<Point>> cands{original};
  if (a.x != b.x && a.y != b.y) {
    cands.push_back({a, {b.x, a.y}, b});
    cands.push_back({a, {a.x, b.y}, b});
    for (Coord x = std::min(a.x, b.x) + 1; x < std::max(a.x, b.x); ++x) cands.push_back({a, {x, a.y}, {x, b.y}, b});
    for (Coord y = std::min(a.y, b.y) + 1; y < std::max(a.y, b.y); ++y) cands.push_back({a, {a.x, y}, {b.x, y}, b});
  }
  std::size_t best = 0;
  double best_cost = cost.path(cands[0]);
  for (std::size_t i = 1; i < cands.size(); ++i) {
    const double c = cost.path(cands[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return simplify(cands[best]);
}

std::vector<EdgeId> assign_layers(const Design& d, const std::vector<std::vector<Point>>& paths,
                                  const std::vector<Point>& pins, const std::vector<std::int32_t>& demand,
                                  const CostWeights& w) {
  const GcellGrid& g = d.grid;
  std::vector<EdgeId> edges;
  std::map<std::pair<Coord, Coord>, std::pair<int, int>> span;  // layer range per node
  const auto touch = [&](Point p, int l) {
    auto [it, fresh] = span.try_emplace({p.x, p.y}, l, l);
    if (!fresh) {
      it->second.first = std::min(it->second.first, l);
      it->second.second = std::max(it->second.second, l);
    }
  };
  for (const Point& p : pins) touch(p, 0);
  for (const auto& path : paths) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const Point a = path[i], b = path[i + 1];
      const bool horizontal = a.y == b.y;
      std::vector<EdgeId> best_edges;
      double best_cost = 0.0;
      int best_layer = -1;
      for (int l = 1; l < g.layers(); ++l) {
        if ((g.dir(l) == LayerDir::Horizontal) != horizontal) continue;
        std::vector<EdgeId> es;
        double c = 0.0;
        if (horizontal) {
          for (Coord x = std::min(a.x, b.x); x < std::max(a.x, b.x); ++x) es.push_back(g.wire(x, a.y, l));
        } else {
          for (Coord y = std::min(a.y, b.y); y < std::max(a.y, b.y); ++y) es.push_back(g.wire(a.x, y, l));
        }
        for (EdgeId e : es) c += detail::edge_cost(g, demand, e, w);
        if (best_layer < 0 || c < best_cost) {
          best_cost = c;
          best_layer = l;
          best_edges = std::move(es);
        }
      }
      edges.insert(edges.end(), best_edges.begin(), best_edges.end());
      touch(a, best_layer);
      touch(b, best_layer);
    }
  }
  for (const auto& [p, range] : span)
    for (int l = range.first; l < range.second; ++l) edges.push_back(g.via(p.first, p.second, l));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

RouteSolution initial_route(const Design& d, const RouteParams& params, double* oarsmt_ms, double* pattern_ms) {
  auto t0 = Clock::now();
  RouteSolution sol;
  sol.nets.resize(d.nets.size());
  sol.demand.assign(d.grid.edge_count(), 0);
  for (std::size_t n = 0; n < d.nets.size(); ++n) sol.nets[n].guide = net_tree(d, d.nets[n], params);
  const auto t1 = Clock::now();
  if (oarsmt_ms) *oarsmt_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  t0 = t1;
  // Small nets first; names break ties.
  std::vector<std::size_t> order(d.nets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto hpwl = [&](std::size_t n) {
    Rect b{d.nets[n].pins.front(), d.nets[n].pins.front()};
    for (const Point& p : d.nets[n].pins) b = b.united(p);
    return Length{b.width()} + b.height();
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Length ha = hpwl(a), hb = hpwl(b);
    return ha != hb ? ha < hb : d.nets[a].name < d.nets[b].name;
  });
  const PlaneCost cost(d, sol.demand, params);
  for (std::size_t n : order) {
    std::vector<std::vector<Point>> paths;
    for (const auto& c : connections(sol.nets[n].guide, d.nets[n].pins)) paths.push_back(choose_pattern(c, cost));
    commit(sol, n, assign_layers(d, paths, d.nets[n].pins, sol.demand, params.weights));
  }
  if (pattern_ms) *pattern_ms = ms_since(t0);
  return sol;
}

}  // namespace oar::groute
