#include <algorithm>
#include <cstdint>
#include <queue>
#include <unordered_map>

#include "oar/oarsmt.hpp"

namespace oar {
namespace {

std::vector<Coord> sorted_unique(std::vector<Coord> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::optional<std::vector<Point>> search(Point a, Point b, const RangeIndex& idx, const Rect& w) {
  std::vector<Coord> xs{a.x, b.x, w.lo.x, w.hi.x};
  std::vector<Coord> ys{a.y, b.y, w.lo.y, w.hi.y};
  for (ObstacleId id : idx.rect_overlaps(w)) {
    const Rect& r = idx.obstacle(id);
    for (Coord x : {r.lo.x, r.hi.x})
      if (x >= w.lo.x && x <= w.hi.x) xs.push_back(x);
    for (Coord y : {r.lo.y, r.hi.y})
      if (y >= w.lo.y && y <= w.hi.y) ys.push_back(y);
  }
  xs = sorted_unique(std::move(xs));
  ys = sorted_unique(std::move(ys));
  const auto ix = [&](Coord x) { return std::uint32_t(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin()); };
  const auto iy = [&](Coord y) { return std::uint32_t(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin()); };
  const auto key = [&](std::uint32_t i, std::uint32_t j) { return std::uint64_t(i) << 32 | j; };
  const auto at = [&](std::uint64_t k) { return Point{xs[k >> 32], ys[k & 0xffffffffu]}; };

  const std::uint64_t src = key(ix(a.x), iy(a.y));
  const std::uint64_t dst = key(ix(b.x), iy(b.y));
  std::unordered_map<std::uint64_t, Length> dist;
  std::unordered_map<std::uint64_t, std::uint64_t> parent;
  using Item = std::pair<Length, std::uint64_t>;  // (f, node); ties by node key
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[src] = 0;
  open.push({manhattan(a, b), src});

  while (!open.empty()) {
    const auto [f, k] = open.top();
    open.pop();
    const Point p = at(k);
    const Length g = dist[k];
    if (f != g + manhattan(p, b)) continue;
    if (k == dst) {
      std::vector<Point> path{p};
      for (std::uint64_t c = k; c != src;) {
        c = parent[c];
        path.push_back(at(c));
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    const std::uint32_t i = std::uint32_t(k >> 32), j = std::uint32_t(k & 0xffffffffu);
    const std::pair<std::int64_t, std::int64_t> steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& [di, dj] : steps) {
      const std::int64_t ni = std::int64_t(i) + di, nj = std::int64_t(j) + dj;
      if (ni < 0 || nj < 0 || ni >= std::int64_t(xs.size()) || nj >= std::int64_t(ys.size())) continue;
      const std::uint64_t nk = key(std::uint32_t(ni), std::uint32_t(nj));
      const Point q = at(nk);
      if (idx.crosses_any({p, q}) || idx.containing(q)) continue;
      const Length ng = g + manhattan(p, q);
      auto it = dist.find(nk);
      if (it != dist.end() && it->second <= ng) continue;
      dist[nk] = ng;
      parent[nk] = k;
      open.push({ng + manhattan(q, b), nk});
    }
  }
  return std::nullopt;
}

// Drops interior vertices of straight runs.
std::vector<Point> simplify(const std::vector<Point>& path) {
  std::vector<Point> out;
  for (const Point& p : path) {
    if (!out.empty() && out.back() == p) continue;
    if (out.size() >= 2) {
      const Point& a = out[out.size() - 2];
      const Point& m = out.back();
      if ((a.x == m.x && m.x == p.x) || (a.y == m.y && m.y == p.y)) out.back() = p;
      else out.push_back(p);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

std::vector<Point> escape_route(Point a, Point b, const RangeIndex& idx, Rect window) {
  if (idx.containing(a) || idx.containing(b)) throw InfeasibleEdge();
  window = window.united(a).united(b);
  Rect everything = window;
  for (const Rect& r : idx.obstacles()) everything = everything.united(r);
  for (;;) {
    if (auto path = search(a, b, idx, window)) return simplify(*path);
    if (window.lo.x < everything.lo.x && window.lo.y < everything.lo.y &&
        window.hi.x > everything.hi.x && window.hi.y > everything.hi.y)
      throw InfeasibleEdge();
    const Coord grow = std::max<Coord>({window.width(), window.height(), 1});
    window = {{window.lo.x - grow, window.lo.y - grow}, {window.hi.x + grow, window.hi.y + grow}};
  }
}

}  // namespace oar
