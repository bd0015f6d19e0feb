#include <algorithm>
#include <map>
#include <numeric>
#include <limits>
#include <set>

#include "oar/oarsmt.hpp"

namespace oar {
namespace {

using Interval = std::pair<Coord, Coord>;

std::vector<Interval> merge_intervals(std::vector<Interval> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<Interval> out;
  for (const Interval& x : iv) {
    if (!out.empty() && x.first <= out.back().second)
      out.back().second = std::max(out.back().second, x.second);
    else
      out.push_back(x);
  }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

RectTree post_process(const RectTree& tree, std::span<const Point> pins) {
  // 1. Planarize: merge collinear pieces, split at every node, pin, crossing.
  std::map<Coord, std::vector<Interval>> rows, cols;
  std::set<Point> marks(pins.begin(), pins.end());
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    const Segment s = tree.segment(e);
    marks.insert(s.a);
    marks.insert(s.b);
    if (s.degenerate()) continue;
    if (s.horizontal())
      rows[s.a.y].emplace_back(std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x));
    else
      cols[s.a.x].emplace_back(std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y));
  }
  for (auto& [y, iv] : rows) iv = merge_intervals(std::move(iv));
  for (auto& [x, iv] : cols) iv = merge_intervals(std::move(iv));

  for (const auto& [y, hiv] : rows) {
    for (const Interval& h : hiv) {
      for (auto it = cols.lower_bound(h.first); it != cols.end() && it->first <= h.second; ++it) {
        for (const Interval& v : it->second)
          if (v.first <= y && y <= v.second) marks.insert({it->first, y});
      }
    }
  }

  std::map<Point, NodeId> id_of;
  std::vector<Point> pts;
  const auto node = [&](Point p) {
    auto [it, fresh] = id_of.try_emplace(p, NodeId(pts.size()));
    if (fresh) pts.push_back(p);
    return it->second;
  };
  for (const Point& p : pins) node(p);

  struct Piece {
    Length len;
    NodeId a, b;
  };
  std::vector<Piece> pieces;
  // marks is ordered by (x, y): per column the y's are contiguous.
  std::map<Coord, std::vector<Coord>> xs_on_row;
  for (const Point& p : marks) xs_on_row[p.y].push_back(p.x);
  for (const auto& [y, hiv] : rows) {
    const auto& xs = xs_on_row[y];  // ascending
    for (const Interval& h : hiv) {
      auto it = std::lower_bound(xs.begin(), xs.end(), h.first);
      Point prev{*it, y};
      for (++it; it != xs.end() && *it <= h.second; ++it) {
        const Point cur{*it, y};
        pieces.push_back({manhattan(prev, cur), node(prev), node(cur)});
        prev = cur;
      }
    }
  }
  for (const auto& [x, viv] : cols) {
    const auto lo = marks.lower_bound({x, std::numeric_limits<Coord>::min()});
    for (const Interval& v : viv) {
      auto it = std::find_if(lo, marks.end(), [&](const Point& p) { return p.x > x || p.y >= v.first; });
      Point prev = *it;
      for (++it; it != marks.end() && it->x == x && it->y <= v.second; ++it) {
        pieces.push_back({manhattan(prev, *it), node(prev), node(*it)});
        prev = *it;
      }
    }
  }

  // 2. Break cycles: Kruskal by (length, creation order).
  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pieces[i].len < pieces[j].len; });
  DisjointSets ds(pts.size());
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(pts.size());
  std::vector<char> kept(pieces.size(), 0);
  for (std::size_t i : order) {
    if (ds.unite(pieces[i].a, pieces[i].b)) {
      kept[i] = 1;
      adj[pieces[i].a].push_back({pieces[i].b, i});
      adj[pieces[i].b].push_back({pieces[i].a, i});
    }
  }

  // 3. Prune dangling non-pin branches.
  const std::size_t pin_count = pins.size();
  std::vector<std::size_t> deg(pts.size());
  for (NodeId i = 0; i < pts.size(); ++i) deg[i] = adj[i].size();
  std::vector<char> gone(pts.size(), 0);
  std::vector<NodeId> stack;
  for (NodeId i = NodeId(pin_count); i < pts.size(); ++i)
    if (deg[i] <= 1) stack.push_back(i);
  while (!stack.empty()) {
    const NodeId i = stack.back();
    stack.pop_back();
    if (gone[i]) continue;
    gone[i] = 1;
    for (const auto& [j, e] : adj[i]) {
      if (!kept[e]) continue;
      kept[e] = 0;
      if (--deg[j] <= 1 && j >= pin_count && !gone[j]) stack.push_back(j);
    }
    deg[i] = 0;
  }

  // 4. Collapse straight-through degree-2 nodes and emit.
  const auto live_edges = [&](NodeId i) {
    std::vector<std::pair<NodeId, std::size_t>> out;
    for (const auto& pe : adj[i])
      if (kept[pe.second]) out.push_back(pe);
    return out;
  };
  const auto straight = [&](NodeId i) {
    if (i < pin_count || deg[i] != 2) return false;
    const auto le = live_edges(i);
    const Point p = pts[i], a = pts[le[0].first], b = pts[le[1].first];
    return (a.x == p.x && b.x == p.x) || (a.y == p.y && b.y == p.y);
  };

  RectTree out;
  std::vector<NodeId> out_id(pts.size(), NodeId(-1));
  const auto emit_node = [&](NodeId i) {
    if (out_id[i] == NodeId(-1)) {
      const NodeRole role = i < pin_count ? NodeRole::Pin
                            : deg[i] >= 3 ? NodeRole::Steiner
                                          : NodeRole::Corner;
      out_id[i] = out.add_node(pts[i], role);
    }
    return out_id[i];
  };
  for (NodeId i = 0; i < pin_count; ++i) emit_node(i);

  std::vector<char> walked(pieces.size(), 0);
  for (NodeId start = 0; start < pts.size(); ++start) {
    if (gone[start] || deg[start] == 0 || straight(start)) continue;
    for (const auto& [first, e0] : live_edges(start)) {
      if (walked[e0]) continue;
      walked[e0] = 1;
      NodeId prev = start, cur = first;
      while (straight(cur)) {
        for (const auto& [nxt, e] : live_edges(cur)) {
          if (nxt == prev || walked[e]) continue;
          walked[e] = 1;
          prev = cur;
          cur = nxt;
          break;
        }
      }
      out.add_edge(emit_node(start), emit_node(cur));
    }
  }
  return out;
}

}  // namespace oar
