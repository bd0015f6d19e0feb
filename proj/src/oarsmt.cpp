#include "oar/oarsmt.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <unordered_set>

namespace oar {

CandidateSet candidate_obstacles(const Segment& e, const RangeIndex& idx) {
  CandidateSet c;
  c.crossing = idx.crossing_obstacles(e);
  c.bbox = Rect::of(e);
  for (ObstacleId id : c.crossing) c.bbox = c.bbox.united(idx.obstacle(id));
  c.ids = idx.rect_overlaps(c.bbox);
  return c;
}

std::vector<std::size_t> merge_group_sizes(std::size_t n_prime, int k_m) {
  std::vector<std::size_t> sizes{1};
  if (n_prime == 0 || k_m <= 0) return sizes;
  const std::size_t step = (n_prime + std::size_t(k_m) - 1) / std::size_t(k_m);
  for (std::size_t i = 1; i <= std::size_t(k_m); ++i) {
    const std::size_t s = std::min(i * step, n_prime);
    if (std::find(sizes.begin(), sizes.end(), s) == sizes.end()) sizes.push_back(s);
  }
  return sizes;
}

MergePlan merge_plan(std::span<const ObstacleId> crossing, const RangeIndex& idx, std::size_t n_m) {
  MergePlan plan;
  plan.group_size = std::max<std::size_t>(n_m, 1);
  for (std::size_t i = 0; i < crossing.size(); i += plan.group_size) {
    const std::size_t end = std::min(crossing.size(), i + plan.group_size);
    std::vector<ObstacleId> group(crossing.begin() + std::ptrdiff_t(i), crossing.begin() + std::ptrdiff_t(end));
    Rect box = idx.obstacle(group.front());
    for (ObstacleId id : group) box = box.united(idx.obstacle(id));
    plan.groups.push_back(std::move(group));
    plan.merged.push_back(box);
  }
  return plan;
}

std::vector<Rect> merged_obstacles(const MergePlan& plan, const CandidateSet& cand,
                                   const RangeIndex& idx) {
  const std::unordered_set<ObstacleId> grouped(cand.crossing.begin(), cand.crossing.end());
  std::vector<Rect> boxes;
  std::vector<char> dirty;
  for (const Rect& r : plan.merged) {
    boxes.push_back(r);
    dirty.push_back(plan.group_size > 1);
  }
  for (ObstacleId id : cand.ids) {
    if (grouped.contains(id)) continue;
    boxes.push_back(idx.obstacle(id));
    dirty.push_back(0);
  }
  // Only merged boxes can overlap anything; fuse until disjoint.
  for (std::size_t i = 0; i < boxes.size();) {
    if (!dirty[i]) {
      ++i;
      continue;
    }
    bool fused = false;
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      if (j == i || !touches_interior(boxes[i], boxes[j])) continue;
      boxes[i] = boxes[i].united(boxes[j]);
      boxes.erase(boxes.begin() + std::ptrdiff_t(j));
      dirty.erase(dirty.begin() + std::ptrdiff_t(j));
      fused = true;
      break;
    }
    if (fused) {
      i = 0;  // indices shifted and the grown box may now hit earlier ones
    } else {
      dirty[i] = 0;
      ++i;
    }
  }
  return boxes;
}

std::vector<Point> hook_nodes(Point t, Dir d, const Rect& bbox, int k_l) {
  Length extent = 0;
  switch (d) {
    case Dir::Left: extent = Length{t.x} - bbox.lo.x; break;
    case Dir::Right: extent = Length{bbox.hi.x} - t.x; break;
    case Dir::Down: extent = Length{t.y} - bbox.lo.y; break;
    case Dir::Up: extent = Length{bbox.hi.y} - t.y; break;
  }
  std::vector<Point> out;
  if (extent <= 0 || k_l <= 0) return out;
  const Length parts = k_l + 1;
  for (Length i = 1; i <= k_l; ++i) {
    const Coord off = Coord((2 * i * extent + parts) / (2 * parts));
    if (off == 0) continue;
    Point h = t;
    switch (d) {
      case Dir::Left: h.x -= off; break;
      case Dir::Right: h.x += off; break;
      case Dir::Down: h.y -= off; break;
      case Dir::Up: h.y += off; break;
    }
    if (out.empty() || out.back() != h) out.push_back(h);
  }
  return out;
}

namespace {

Dir direction(Point from, Point to) {
  if (from.y == to.y) return to.x > from.x ? Dir::Right : Dir::Left;
  return to.y > from.y ? Dir::Up : Dir::Down;
}

// Working graph for the iterative edge updating.
class WorkTree {
 public:
  struct Edge {
    NodeId u, v;
    int depth;
    bool alive;
  };

  explicit WorkTree(const RectTree& t) {
    for (std::size_t i = 0; i < t.node_count(); ++i) add_node(t.points[i], t.roles[i]);
    for (const auto& e : t.edges) add_edge(e.u, e.v, 0);
  }

  NodeId add_node(Point p, NodeRole r) {
    points.push_back(p);
    roles.push_back(r);
    incident.emplace_back();
    return NodeId(points.size() - 1);
  }
  std::size_t add_edge(NodeId u, NodeId v, int depth) {
    edges.push_back({u, v, depth, true});
    incident[u].push_back(edges.size() - 1);
    incident[v].push_back(edges.size() - 1);
    return edges.size() - 1;
  }
  void kill(std::size_t e) { edges[e].alive = false; }

  std::vector<std::size_t> live_incident(NodeId n) const {
    std::vector<std::size_t> out;
    for (std::size_t e : incident[n])
      if (edges[e].alive && points[edges[e].u] != points[edges[e].v]) out.push_back(e);
    return out;
  }
  NodeId other(std::size_t e, NodeId n) const { return edges[e].u == n ? edges[e].v : edges[e].u; }
  Segment segment(std::size_t e) const { return {points[edges[e].u], points[edges[e].v]}; }

  RectTree to_tree() const {
    RectTree t;
    t.points = points;
    t.roles = roles;
    for (const Edge& e : edges)
      if (e.alive) t.add_edge(e.u, e.v);
    return t;
  }

  std::vector<Point> points;
  std::vector<NodeRole> roles;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> incident;
};

struct Choice {
  Length local_wl = std::numeric_limits<Length>::max();
  std::vector<Point> chain;  // from the source node to the target node
  bool reversed = false;     // chain runs v -> u
  bool flipped = false;      // ER1 with the other L orientation
  NodeId corner = 0;         // ER1: the corner node of the L
  std::size_t leg = 0;       // ER1: the L's other edge
  Point new_corner;          // ER1 flipped: the flipped corner
  std::vector<Point> leg_chain;  // ER1 flipped: new corner to the leg's far end
};

class Generator {
 public:
  Generator(std::span<const Point> pins, const RangeIndex& idx, const OarsmtParams& params)
      : pins_(pins), idx_(idx), params_(params) {}

  OarsmtResult run();

 private:
  void process(std::size_t e);
  std::optional<std::vector<Point>> try_update(Point s, Point t, const Line& l_r, const ObstacleList& obs);
  bool valid_chain(const std::vector<Point>& chain) const;
  void consider(Choice& best, Choice cand) const;
  void evaluate_l_shape(std::size_t e, NodeId a, NodeId c, std::size_t leg, const CandidateSet& cand, Choice& best);
  void evaluate_general(std::size_t e, const CandidateSet& cand, Choice& best);
  void apply(std::size_t e, const Choice& c);
  void escape(std::size_t e, const CandidateSet& cand);
  std::size_t add_chain(const std::vector<Point>& chain, NodeId from, NodeId to, int depth);

  std::span<const Point> pins_;
  const RangeIndex& idx_;
  const OarsmtParams& params_;
  std::optional<WorkTree> work_;
  std::deque<std::size_t> queue_;
  OarsmtStats stats_;
  std::size_t budget_ = 0;
};

std::vector<Point> chain_points(const std::vector<Segment>& segs) {
  std::vector<Point> out;
  for (const Segment& s : segs) {
    if (out.empty()) out.push_back(s.a);
    if (out.back() != s.b) out.push_back(s.b);
  }
  return out;
}

std::vector<Segment> chain_segments(const std::vector<Point>& chain) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) out.push_back({chain[i], chain[i + 1]});
  return out;
}

std::optional<std::vector<Point>> Generator::try_update(Point s, Point t, const Line& l_r,
                                                        const ObstacleList& obs) {
  ++stats_.edge_update_calls;
  if (obs.containing(s) || obs.containing(t)) return std::nullopt;
  const EdgeUpdateResult r = edge_update({s, t, l_r}, obs);
  if (r.status != UpdateStatus::Complete) return std::nullopt;
  std::vector<Point> chain = chain_points(r.edges);
  if (!valid_chain(chain)) return std::nullopt;
  return chain;
}

bool Generator::valid_chain(const std::vector<Point>& chain) const {
  for (const Point& p : chain)
    if (idx_.containing(p)) return false;
  return true;
}

void Generator::consider(Choice& best, Choice cand) const {
  if (cand.local_wl < best.local_wl) best = std::move(cand);
}

ObstacleList list_of(const RangeIndex& idx, std::span<const ObstacleId> ids) {
  std::vector<Rect> rects;
  rects.reserve(ids.size());
  for (ObstacleId id : ids) rects.push_back(idx.obstacle(id));
  return ObstacleList(std::move(rects));
}

void Generator::evaluate_l_shape(std::size_t e, NodeId a, NodeId c, std::size_t leg,
                                 const CandidateSet& cand, Choice& best) {
  WorkTree& w = *work_;
  const NodeId b = w.other(leg, c);
  const Point pa = w.points[a], pc = w.points[c], pb = w.points[b];
  const Line diagonal{pa, pb};
  const Segment leg_seg{pc, pb};

  const ObstacleList obs = list_of(idx_, cand.ids);
  if (auto chain = try_update(pa, pc, diagonal, obs)) {
    auto segs = chain_segments(*chain);
    segs.push_back(leg_seg);
    Choice ch;
    ch.local_wl = union_length(segs);
    ch.chain = std::move(*chain);
    ch.reversed = w.edges[e].u != a;
    ch.corner = c;
    ch.leg = leg;
    consider(best, std::move(ch));
  }

  const Point flipped{pa.x + pb.x - pc.x, pa.y + pb.y - pc.y};
  if (idx_.containing(flipped)) return;
  const Segment e_flip{pa, flipped};
  const CandidateSet cand_flip = candidate_obstacles(e_flip, idx_);
  std::optional<std::vector<Point>> chain;
  if (cand_flip.crossing.empty()) {
    chain = std::vector<Point>{pa, flipped};
  } else {
    chain = try_update(pa, flipped, diagonal, list_of(idx_, cand_flip.ids));
  }
  if (!chain) return;
  // The new leg replaces the old one and must be routed legally as well.
  const Segment leg_flip{flipped, pb};
  const CandidateSet cand_leg = candidate_obstacles(leg_flip, idx_);
  std::optional<std::vector<Point>> leg_chain;
  if (cand_leg.crossing.empty()) {
    leg_chain = std::vector<Point>{flipped, pb};
  } else {
    leg_chain = try_update(flipped, pb, {flipped, pb}, list_of(idx_, cand_leg.ids));
  }
  if (!leg_chain) return;
  auto segs = chain_segments(*chain);
  for (const Segment& s : chain_segments(*leg_chain)) segs.push_back(s);
  Choice ch;
  ch.local_wl = union_length(segs);
  ch.chain = std::move(*chain);
  ch.reversed = w.edges[e].u != a;
  ch.flipped = true;
  ch.corner = c;
  ch.leg = leg;
  ch.new_corner = flipped;
  ch.leg_chain = std::move(*leg_chain);
  consider(best, std::move(ch));
}

void Generator::evaluate_general(std::size_t e, const CandidateSet& cand, Choice& best) {
  WorkTree& w = *work_;
  const NodeId u = w.edges[e].u, v = w.edges[e].v;
  const Point pu = w.points[u], pv = w.points[v];

  std::vector<std::size_t> sizes{1};
  if (params_.er3) sizes = merge_group_sizes(cand.crossing.size(), params_.k_m);

  for (std::size_t n_m : sizes) {
    ObstacleList obs;
    if (n_m == 1) {
      obs = list_of(idx_, cand.ids);
    } else {
      const MergePlan plan = merge_plan(cand.crossing, idx_, n_m);
      obs = ObstacleList(merged_obstacles(plan, cand, idx_));
    }
    if (obs.containing(pu) || obs.containing(pv)) continue;

    const int orderings = params_.er2 ? 2 : 1;
    for (int o = 0; o < orderings; ++o) {
      const NodeId s = o == 0 ? u : v;
      const NodeId t = o == 0 ? v : u;
      const Point ps = w.points[s], pt = w.points[t];
      std::vector<Line> lines{{ps, pt}};
      if (params_.er2) {
        const bool horizontal = ps.y == pt.y;
        std::vector<Dir> dirs;
        for (std::size_t f : w.live_incident(t)) {
          if (f == e) continue;
          const Point q = w.points[w.other(f, t)];
          const Dir d = direction(pt, q);
          if (is_horizontal(d) == horizontal) continue;
          if (std::find(dirs.begin(), dirs.end(), d) == dirs.end()) dirs.push_back(d);
        }
        std::sort(dirs.begin(), dirs.end());
        for (Dir d : dirs)
          for (const Point& h : hook_nodes(pt, d, cand.bbox, params_.k_l))
            if (h != ps) lines.push_back({ps, h});
      }
      for (const Line& l : lines) {
        auto chain = try_update(ps, pt, l, obs);
        if (!chain) continue;
        Choice ch;
        const auto segs = chain_segments(*chain);
        ch.local_wl = union_length(segs);
        ch.chain = std::move(*chain);
        ch.reversed = o == 1;
        consider(best, std::move(ch));
      }
    }
  }
}

std::size_t Generator::add_chain(const std::vector<Point>& chain, NodeId from, NodeId to, int depth) {
  WorkTree& w = *work_;
  std::size_t added = 0;
  NodeId prev = from;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const NodeId next = i + 1 == chain.size() ? to : w.add_node(chain[i], NodeRole::Corner);
    if (w.points[prev] != w.points[next]) {
      queue_.push_back(w.add_edge(prev, next, depth));
      ++added;
    }
    prev = next;
  }
  return added;
}

void Generator::apply(std::size_t e, const Choice& c) {
  WorkTree& w = *work_;
  const int depth = w.edges[e].depth + 1;
  const NodeId u = w.edges[e].u, v = w.edges[e].v;
  const NodeId from = c.reversed ? v : u;
  const NodeId to = c.reversed ? u : v;
  w.kill(e);
  if (!c.flipped) {
    add_chain(c.chain, from, to, depth);
    return;
  }
  // ER1 flip: the chain ends at the new corner, which then joins the far end
  // of the old leg.
  const NodeId far = w.other(c.leg, c.corner);
  w.kill(c.leg);
  const NodeId nc = w.add_node(c.new_corner, NodeRole::Corner);
  add_chain(c.chain, from, nc, depth);
  add_chain(c.leg_chain, nc, far, depth);
}

void Generator::escape(std::size_t e, const CandidateSet& cand) {
  WorkTree& w = *work_;
  ++stats_.escape_routes;
  const NodeId u = w.edges[e].u, v = w.edges[e].v;
  const std::vector<Point> path = escape_route(w.points[u], w.points[v], idx_, cand.bbox);
  w.kill(e);
  NodeId prev = u;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const NodeId next = i + 1 == path.size() ? v : w.add_node(path[i], NodeRole::Corner);
    w.add_edge(prev, next, params_.repair_depth);
    prev = next;
  }
}

void Generator::process(std::size_t e) {
  WorkTree& w = *work_;
  if (!w.edges[e].alive) return;
  const Segment seg = w.segment(e);
  if (seg.degenerate()) return;
  const CandidateSet cand = candidate_obstacles(seg, idx_);
  if (cand.crossing.empty()) return;

  if (w.edges[e].depth >= params_.repair_depth || stats_.rule_updates >= budget_) {
    escape(e, cand);
    return;
  }
  ++stats_.rule_updates;

  const NodeId u = w.edges[e].u, v = w.edges[e].v;
  Choice best;
  // The plain update is the incumbent; rules replace it only when shorter.
  {
    const ObstacleList obs = list_of(idx_, cand.ids);
    if (auto chain = try_update(seg.a, seg.b, {seg.a, seg.b}, obs)) {
      best.chain = std::move(*chain);
      best.local_wl = union_length(chain_segments(best.chain));
    }
  }

  // L-shape detection: an endpoint of degree 2, not a pin, whose other edge
  // is orthogonal to e.
  bool on_l = false;
  if (params_.er1) {
    for (const NodeId c : {v, u}) {
      if (w.roles[c] == NodeRole::Pin) continue;
      const auto inc = w.live_incident(c);
      if (inc.size() != 2) continue;
      const std::size_t leg = inc[0] == e ? inc[1] : inc[0];
      const Segment ls = w.segment(leg);
      if (ls.horizontal() == seg.horizontal()) continue;
      on_l = true;
      // The incumbent must account for the leg as well.
      if (best.local_wl != std::numeric_limits<Length>::max()) {
        auto segs = chain_segments(best.chain);
        segs.push_back(ls);
        best.local_wl = union_length(segs);
      }
      evaluate_l_shape(e, c == v ? u : v, c, leg, cand, best);
      break;
    }
  }
  if (!on_l && (params_.er2 || params_.er3)) {
    evaluate_general(e, cand, best);
  }

  if (best.chain.empty()) {
    escape(e, cand);
    return;
  }
  apply(e, best);
}

OarsmtResult Generator::run() {
  if (pins_.size() < 2) throw std::invalid_argument("oarsmt_generate needs at least 2 pins");
  if (std::unordered_set<Point>(pins_.begin(), pins_.end()).size() != pins_.size())
    throw std::invalid_argument("oarsmt_generate needs distinct pins");
  for (const Point& p : pins_)
    if (auto id = idx_.containing(p)) throw PinInsideObstacle(p, *id);

  const Topology topo = params_.seed_generator ? params_.seed_generator(pins_)
                                               : seed_topology(pins_, params_.seed_mode);
  const RectTree rect = rectilinearize(topo, params_.seed);
  stats_.initial_edges = rect.edges.size();
  const RectTree legal = legalize_nodes(rect, idx_, &stats_.legalization_edges);
  budget_ = std::size_t(std::max(params_.repair_depth, 1)) *
            (stats_.initial_edges + stats_.legalization_edges);

  work_.emplace(legal);
  for (std::size_t e = 0; e < work_->edges.size(); ++e) queue_.push_back(e);
  while (!queue_.empty()) {
    const std::size_t e = queue_.front();
    queue_.pop_front();
    process(e);
  }
  return {post_process(work_->to_tree(), pins_), stats_};
}

}  // namespace

OarsmtResult oarsmt_generate(std::span<const Point> pins, const RangeIndex& idx,
                             const OarsmtParams& params) {
  OarsmtResult with_rules = Generator(pins, idx, params).run();
  if (!params.guard_rules || !(params.er1 || params.er2 || params.er3)) return with_rules;
  OarsmtParams plain = params;
  plain.er1 = plain.er2 = plain.er3 = false;
  OarsmtResult without = Generator(pins, idx, plain).run();
  if (without.tree.wirelength() >= with_rules.tree.wirelength()) return with_rules;
  without.stats.rules_reverted = true;
  return without;
}

OarsmtResult oarsmt_generate(std::span<const Point> pins, std::span<const Rect> obstacles,
                             const OarsmtParams& params) {
  const RangeIndex idx = RangeIndex::build(obstacles, pins);
  return oarsmt_generate(pins, idx, params);
}

}  // namespace oar
