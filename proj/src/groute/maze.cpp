#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "oar/groute/route.hpp"
#include "route_internal.hpp"

namespace oar::groute {

const char* graph_kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::Ordinary: return "ordinary";
    case GraphKind::Guided: return "guided";
    case GraphKind::ObstacleAware: return "obstacle_aware";
  }
  return "?";
}

SparseGraph build_sparse_graph(GraphKind kind, const Design& d, std::size_t net, const RouteSolution& sol,
                               const RouteParams& params) {
  const GcellGrid& g = d.grid;
  SparseGraph sg;
  sg.kind = kind;
  const auto add_x = [&](Coord x) {
    if (x >= 0 && x < g.nx()) sg.xs.push_back(x);
  };
  const auto add_y = [&](Coord y) {
    if (y >= 0 && y < g.ny()) sg.ys.push_back(y);
  };
  const Coord stride = std::max<Coord>(params.stride, 1);
  for (Coord x = 0; x < g.nx(); x += stride) add_x(x);
  for (Coord y = 0; y < g.ny(); y += stride) add_y(y);
  add_x(g.nx() - 1);
  add_y(g.ny() - 1);
  for (const Point& p : d.nets[net].pins) {
    add_x(p.x);
    add_y(p.y);
  }
  if (kind == GraphKind::Guided) {
    const Coord w = std::max<Coord>(params.guided_width, 0);
    for (const Segment& s : sol.nets[net].guide) {
      for (const Point& p : {s.a, s.b}) {
        add_x(p.x);
        add_y(p.y);
      }
      for (Coord k = -w; k <= w; ++k) {
        if (s.horizontal())
          add_y(s.a.y + k);
        else
          add_x(s.a.x + k);
      }
    }
  } else if (kind == GraphKind::ObstacleAware) {
    for (const Rect& r : d.obstacles) {
      for (Coord x : {r.lo.x - 1, r.lo.x, r.hi.x - 1, r.hi.x}) add_x(x);
      for (Coord y : {r.lo.y - 1, r.lo.y, r.hi.y - 1, r.hi.y}) add_y(y);
    }
  }
  for (auto* v : {&sg.xs, &sg.ys}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return sg;
}

double route_cost(const Design& d, const std::vector<EdgeId>& edges, const std::vector<std::int32_t>& demand,
                  const CostWeights& w) {
  double c = 0.0;
  for (EdgeId e : edges) c += detail::edge_cost(d.grid, demand, e, w);
  return c;
}

namespace {

class Maze {
 public:
  Maze(const Design& d, const SparseGraph& g, const std::vector<std::int32_t>& demand, const CostWeights& w)
      : grid_(d.grid), g_(g), nx_(g.xs.size()), ny_(g.ys.size()), layers_(std::size_t(d.grid.layers())) {
    // Cost of each span between neighbouring kept lines, per layer.
    span_.assign(layers_ * nx_ * ny_, 0.0);
    for (std::size_t l = 1; l < layers_; ++l) {
      const bool horizontal = grid_.dir(int(l)) == LayerDir::Horizontal;
      for (std::size_t j = 0; j < ny_; ++j)
        for (std::size_t i = 0; i < nx_; ++i) {
          double c = 0.0;
          if (horizontal && i + 1 < nx_) {
            for (Coord x = g.xs[i]; x < g.xs[i + 1]; ++x)
              c += detail::edge_cost(grid_, demand, grid_.wire(x, g.ys[j], int(l)), w);
          } else if (!horizontal && j + 1 < ny_) {
            for (Coord y = g.ys[j]; y < g.ys[j + 1]; ++y)
              c += detail::edge_cost(grid_, demand, grid_.wire(g.xs[i], y, int(l)), w);
          }
          span_[id(i, j, l)] = c;
        }
    }
    via_.assign(nx_ * ny_, 0.0);
    for (std::size_t j = 0; j < ny_; ++j)
      for (std::size_t i = 0; i < nx_; ++i)
        via_[j * nx_ + i] = w.via_cost + (grid_.cell_blocked(g.xs[i], g.ys[j]) ? w.alpha_ov : 0.0);
  }

  std::size_t size() const { return layers_ * nx_ * ny_; }
  std::size_t id(std::size_t i, std::size_t j, std::size_t l) const { return (l * ny_ + j) * nx_ + i; }

  std::size_t pin_vertex(Point p) const {
    const auto i = std::size_t(std::lower_bound(g_.xs.begin(), g_.xs.end(), p.x) - g_.xs.begin());
    const auto j = std::size_t(std::lower_bound(g_.ys.begin(), g_.ys.end(), p.y) - g_.ys.begin());
    return id(i, j, 0);
  }

  template <class F>
  void neighbours(std::size_t v, F&& f) const {
    const std::size_t i = v % nx_, j = v / nx_ % ny_, l = v / (nx_ * ny_);
    if (l > 0) {
      if (grid_.dir(int(l)) == LayerDir::Horizontal) {
        if (i + 1 < nx_) f(v + 1, span_[v]);
        if (i > 0) f(v - 1, span_[v - 1]);
      } else {
        if (j + 1 < ny_) f(v + nx_, span_[v]);
        if (j > 0) f(v - nx_, span_[v - nx_]);
      }
    }
    const double vc = via_[j * nx_ + i];
    if (l + 1 < layers_) f(v + nx_ * ny_, vc);
    if (l > 0) f(v - nx_ * ny_, vc);
  }

  // Grid edges of the sparse edge u - v.
  void expand(std::size_t u, std::size_t v, std::vector<EdgeId>& out) const {
    if (u > v) std::swap(u, v);
    const std::size_t i = u % nx_, j = u / nx_ % ny_, l = u / (nx_ * ny_);
    if (v - u == nx_ * ny_) {
      out.push_back(grid_.via(g_.xs[i], g_.ys[j], int(l)));
    } else if (v - u == 1) {
      for (Coord x = g_.xs[i]; x < g_.xs[i + 1]; ++x) out.push_back(grid_.wire(x, g_.ys[j], int(l)));
    } else {
      for (Coord y = g_.ys[j]; y < g_.ys[j + 1]; ++y) out.push_back(grid_.wire(g_.xs[i], y, int(l)));
    }
  }

 private:
  const GcellGrid& grid_;
  const SparseGraph& g_;
  std::size_t nx_, ny_, layers_;
  std::vector<double> span_;
  std::vector<double> via_;
};

}  // namespace

std::vector<EdgeId> maze_route(const Design& d, std::size_t net, const SparseGraph& g,
                               const std::vector<std::int32_t>& demand, const CostWeights& w) {
  const Net& n = d.nets[net];
  if (n.pins.size() < 2) return {};
  const Maze maze(d, g, demand, w);
  std::vector<std::size_t> targets;
  for (const Point& p : n.pins) {
    if (!std::binary_search(g.xs.begin(), g.xs.end(), p.x) || !std::binary_search(g.ys.begin(), g.ys.end(), p.y))
      throw std::invalid_argument("sparse graph misses a pin line of net " + n.name);
    targets.push_back(maze.pin_vertex(p));
  }
  const std::size_t V = maze.size();
  std::vector<char> in_tree(V, 0), is_target(V, 0);
  std::vector<std::size_t> tree{targets.front()};
  in_tree[targets.front()] = 1;
  std::size_t remaining = 0;
  for (std::size_t k = 1; k < targets.size(); ++k)
    if (!is_target[targets[k]]) {
      is_target[targets[k]] = 1;
      ++remaining;
    }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(V, kInf);
  std::vector<std::size_t> parent(V, kNone);
  std::vector<EdgeId> edges;
  using Item = std::pair<double, std::size_t>;
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), kNone);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t v : tree) {
      dist[v] = 0.0;
      pq.push({0.0, v});
    }
    std::size_t reached = kNone;
    while (!pq.empty()) {
      const auto [dv, v] = pq.top();
      pq.pop();
      if (dv > dist[v]) continue;
      if (is_target[v]) {
        reached = v;
        break;
      }
      maze.neighbours(v, [&](std::size_t u, double c) {
        const double du = dv + c;
        if (du < dist[u]) {
          dist[u] = du;
          parent[u] = v;
          pq.push({du, u});
        }
      });
    }
    if (reached == kNone) throw Unreachable(n.name);
    for (std::size_t v = reached; !in_tree[v]; v = parent[v]) {
      in_tree[v] = 1;
      tree.push_back(v);
      if (is_target[v]) {
        is_target[v] = 0;
        --remaining;
      }
      maze.expand(v, parent[v], edges);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace oar::groute
