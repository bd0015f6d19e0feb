#include "oar/rsmt_seed.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "oar/rng.hpp"

namespace oar {
namespace {

using Link = std::pair<NodeId, NodeId>;

// Candidate sets above this size make exhaustive 1-Steiner gain evaluation
// too slow; larger nets use median-of-neighbours candidates instead.
constexpr std::size_t kHananCandidateMaxPins = 64;

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

std::vector<Link> prim(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  std::vector<Link> links;
  if (n < 2) return links;
  links.reserve(n - 1);
  std::vector<Length> best(n, std::numeric_limits<Length>::max());
  std::vector<NodeId> from(n, 0);
  std::vector<char> in(n, 0);
  in[0] = 1;
  for (std::size_t i = 1; i < n; ++i) best[i] = manhattan(pts[0], pts[i]);
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!in[i] && (pick == n || best[i] < best[pick])) pick = i;
    in[pick] = 1;
    links.emplace_back(from[pick], NodeId(pick));
    for (std::size_t i = 0; i < n; ++i) {
      if (in[i]) continue;
      const Length d = manhattan(pts[pick], pts[i]);
      if (d < best[i]) {
        best[i] = d;
        from[i] = NodeId(pick);
      }
    }
  }
  return links;
}

Length links_length(std::span<const Point> pts, std::span<const Link> links) {
  Length total = 0;
  for (const auto& [a, b] : links) total += manhattan(pts[a], pts[b]);
  return total;
}

struct WeightedLink {
  Length len;
  NodeId a, b;
  auto operator<=>(const WeightedLink&) const = default;
};

// MST length of pts + {x}, given the MST of pts sorted by length. Any MST edge
// of the augmented set is either an old MST edge or incident to x.
Length mst_length_with(std::span<const Point> pts, std::span<const WeightedLink> sorted_mst, Point x,
                       std::vector<WeightedLink>& scratch) {
  const NodeId xi = NodeId(pts.size());
  scratch.clear();
  for (NodeId i = 0; i < pts.size(); ++i) scratch.push_back({manhattan(pts[i], x), xi, i});
  std::sort(scratch.begin(), scratch.end());
  DisjointSets ds(pts.size() + 1);
  Length total = 0;
  std::size_t i = 0, j = 0, joined = 0;
  while (joined < pts.size()) {
    const bool take_old = j == scratch.size() ||
                          (i < sorted_mst.size() && sorted_mst[i].len <= scratch[j].len);
    const WeightedLink& w = take_old ? sorted_mst[i++] : scratch[j++];
    if (ds.unite(w.a, w.b)) {
      total += w.len;
      ++joined;
    }
  }
  return total;
}

std::vector<WeightedLink> sorted_links(std::span<const Point> pts, std::span<const Link> links) {
  std::vector<WeightedLink> out;
  out.reserve(links.size());
  for (const auto& [a, b] : links) out.push_back({manhattan(pts[a], pts[b]), a, b});
  std::sort(out.begin(), out.end());
  return out;
}

// Drops degree-1 Steiner points and splices out degree-2 ones. Neither step
// increases length (triangle inequality).
void prune_steiners(std::vector<Point>& pts, std::vector<Link>& links, std::size_t pins) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::size_t>> inc(pts.size());
    for (std::size_t e = 0; e < links.size(); ++e) {
      inc[links[e].first].push_back(e);
      inc[links[e].second].push_back(e);
    }
    for (std::size_t s = pins; s < pts.size(); ++s) {
      if (inc[s].size() >= 3) continue;
      std::vector<NodeId> nbr;
      for (std::size_t e : inc[s])
        nbr.push_back(links[e].first == s ? links[e].second : links[e].first);
      std::vector<Link> kept;
      for (std::size_t e = 0; e < links.size(); ++e)
        if (links[e].first != s && links[e].second != s) kept.push_back(links[e]);
      if (nbr.size() == 2) kept.emplace_back(nbr[0], nbr[1]);
      // Remove point s and renumber.
      for (auto& [a, b] : kept) {
        if (a > s) --a;
        if (b > s) --b;
      }
      pts.erase(pts.begin() + std::ptrdiff_t(s));
      links = std::move(kept);
      changed = true;
      break;
    }
  }
}

Topology make_topology(std::vector<Point> pts, std::vector<Link> links, std::size_t pins) {
  prune_steiners(pts, links, pins);
  Topology t;
  t.roles.assign(pts.size(), NodeRole::Steiner);
  std::fill_n(t.roles.begin(), pins, NodeRole::Pin);
  t.nodes = std::move(pts);
  t.links = std::move(links);
  return t;
}

std::vector<Point> hanan_candidates(std::span<const Point> pins) {
  std::vector<Coord> xs, ys;
  for (const Point& p : pins) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const std::unordered_set<Point> taken(pins.begin(), pins.end());
  std::vector<Point> out;
  for (Coord x : xs)
    for (Coord y : ys)
      if (!taken.contains({x, y})) out.push_back({x, y});
  return out;
}

Topology exact_small(std::span<const Point> pins) {
  const std::size_t m = pins.size();
  const std::vector<Point> cand = hanan_candidates(pins);
  std::vector<Point> pts(pins.begin(), pins.end());
  Length best = links_length(pts, prim(pts));
  std::vector<std::size_t> best_pick;

  std::vector<std::size_t> pick;
  const std::size_t max_steiner = m - 2;
  // Depth-first enumeration of candidate subsets of size <= m - 2.
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!pick.empty()) {
      pts.resize(m);
      for (std::size_t i : pick) pts.push_back(cand[i]);
      const Length len = links_length(pts, prim(pts));
      if (len < best) {
        best = len;
        best_pick = pick;
      }
    }
    if (pick.size() == max_steiner) return;
    for (std::size_t i = start; i < cand.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  recurse(recurse, 0);

  pts.assign(pins.begin(), pins.end());
  for (std::size_t i : best_pick) pts.push_back(cand[i]);
  auto links = prim(pts);
  return make_topology(std::move(pts), std::move(links), m);
}

// Batched iterated 1-Steiner over the full Hanan candidate set.
Topology iterated_one_steiner(std::span<const Point> pins) {
  const std::size_t m = pins.size();
  std::vector<Point> pts(pins.begin(), pins.end());
  const std::vector<Point> cand = hanan_candidates(pins);
  std::vector<WeightedLink> scratch;

  for (std::size_t round = 0; round < m; ++round) {
    std::vector<Link> links = prim(pts);
    std::vector<WeightedLink> mst = sorted_links(pts, links);
    Length base = links_length(pts, links);
    const std::unordered_set<Point> present(pts.begin(), pts.end());

    std::vector<std::pair<Length, std::size_t>> gains;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      if (present.contains(cand[c])) continue;
      const Length g = base - mst_length_with(pts, mst, cand[c], scratch);
      if (g > 0) gains.emplace_back(-g, c);
    }
    if (gains.empty()) break;
    std::sort(gains.begin(), gains.end());

    bool added = false;
    for (const auto& [neg_gain, c] : gains) {
      const Length g = base - mst_length_with(pts, mst, cand[c], scratch);
      if (g <= 0) continue;
      pts.push_back(cand[c]);
      links = prim(pts);
      mst = sorted_links(pts, links);
      base = links_length(pts, links);
      added = true;
    }
    links = prim(pts);
    prune_steiners(pts, links, m);
    if (!added) break;
  }
  auto links = prim(pts);
  return make_topology(std::move(pts), std::move(links), m);
}

Point median3(Point a, Point b, Point c) {
  const auto med = [](Coord x, Coord y, Coord z) { return std::max(std::min(x, y), std::min(std::max(x, y), z)); };
  return {med(a.x, b.x, c.x), med(a.y, b.y, c.y)};
}

// For large nets: repeatedly replace two links (u,v), (u,w) sharing a node by
// a Steiner point at the median of u, v, w. Medians of pins are Hanan points,
// so this is 1-Steiner over a restricted candidate set.
Topology median_steinerize(std::span<const Point> pins) {
  const std::size_t m = pins.size();
  std::vector<Point> pts(pins.begin(), pins.end());
  std::vector<Link> links = prim(pts);

  for (int pass = 0; pass < 4; ++pass) {
    std::vector<std::vector<std::size_t>> inc(pts.size());
    for (std::size_t e = 0; e < links.size(); ++e) {
      inc[links[e].first].push_back(e);
      inc[links[e].second].push_back(e);
    }
    struct Move {
      Length gain;
      NodeId u;
      std::size_t e1, e2;
      Point s;
    };
    std::vector<Move> moves;
    for (NodeId u = 0; u < pts.size(); ++u) {
      const auto& es = inc[u];
      Move best{0, u, 0, 0, {}};
      for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = i + 1; j < es.size(); ++j) {
          const NodeId v = links[es[i]].first == u ? links[es[i]].second : links[es[i]].first;
          const NodeId w = links[es[j]].first == u ? links[es[j]].second : links[es[j]].first;
          const Point s = median3(pts[u], pts[v], pts[w]);
          const Length g = manhattan(pts[u], pts[v]) + manhattan(pts[u], pts[w]) -
                           (manhattan(s, pts[u]) + manhattan(s, pts[v]) + manhattan(s, pts[w]));
          if (g > best.gain) best = {g, u, es[i], es[j], s};
        }
      }
      if (best.gain > 0) moves.push_back(best);
    }
    if (moves.empty()) break;
    std::stable_sort(moves.begin(), moves.end(),
                     [](const Move& a, const Move& b) { return a.gain > b.gain; });

    std::unordered_set<Point> present(pts.begin(), pts.end());
    std::vector<char> used(links.size(), 0);
    std::vector<Link> added;
    for (const Move& mv : moves) {
      if (used[mv.e1] || used[mv.e2] || present.contains(mv.s)) continue;
      used[mv.e1] = used[mv.e2] = 1;
      const NodeId v = links[mv.e1].first == mv.u ? links[mv.e1].second : links[mv.e1].first;
      const NodeId w = links[mv.e2].first == mv.u ? links[mv.e2].second : links[mv.e2].first;
      const NodeId s = NodeId(pts.size());
      pts.push_back(mv.s);
      present.insert(mv.s);
      added.emplace_back(s, mv.u);
      added.emplace_back(s, v);
      added.emplace_back(s, w);
    }
    std::vector<Link> next;
    for (std::size_t e = 0; e < links.size(); ++e)
      if (!used[e]) next.push_back(links[e]);
    next.insert(next.end(), added.begin(), added.end());
    links = std::move(next);
    prune_steiners(pts, links, m);
  }
  // The MST over pins and the chosen Steiner points is never longer.
  std::vector<Link> mst = prim(pts);
  if (links_length(pts, mst) < links_length(pts, links)) links = std::move(mst);
  return make_topology(std::move(pts), std::move(links), m);
}

}  // namespace

Length Topology::wirelength() const { return links_length(nodes, links); }

Topology rectilinear_mst(std::span<const Point> pins) {
  std::vector<Point> pts(pins.begin(), pins.end());
  auto links = prim(pts);
  return make_topology(std::move(pts), std::move(links), pins.size());
}

Topology seed_topology(std::span<const Point> pins, SeedMode mode) {
  if (pins.size() < 2) throw std::invalid_argument("seed_topology needs at least 2 pins");
  if (std::unordered_set<Point>(pins.begin(), pins.end()).size() != pins.size())
    throw std::invalid_argument("seed_topology needs distinct pins");
  if (mode == SeedMode::ExactSmall && pins.size() > kExactMaxPins) throw TooManyPinsForExact(pins.size());
  if (pins.size() == 2) return rectilinear_mst(pins);

  const bool exact = mode == SeedMode::ExactSmall || (mode == SeedMode::Auto && pins.size() <= kAutoExactMaxPins);
  if (exact) return exact_small(pins);
  if (pins.size() <= kHananCandidateMaxPins) return iterated_one_steiner(pins);
  return median_steinerize(pins);
}

RectTree rectilinearize(const Topology& t, std::uint64_t seed) {
  RectTree tree;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) tree.add_node(t.nodes[i], t.roles[i]);
  Rng rng(seed);
  for (const auto& [a, b] : t.links) {
    const Point p = t.nodes[a];
    const Point q = t.nodes[b];
    if (p.x == q.x || p.y == q.y) {
      tree.add_edge(a, b);
      continue;
    }
    const Point corner = rng.coin() ? Point{q.x, p.y} : Point{p.x, q.y};
    const NodeId c = tree.add_node(corner, NodeRole::Corner);
    tree.add_edge(a, c);
    tree.add_edge(c, b);
  }
  return tree;
}

}  // namespace oar
