#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_map>

#include "oar/groute/route.hpp"
#include "oar/kernels.hpp"
#include "route_internal.hpp"

namespace oar::groute {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

void rip_up(RouteSolution& sol, std::size_t net) {
  for (EdgeId e : sol.nets[net].edges) --sol.demand[e];
  sol.nets[net].edges.clear();
}

void commit(RouteSolution& sol, std::size_t net, std::vector<EdgeId> edges) {
  for (EdgeId e : sol.nets[net].edges) --sol.demand[e];
  for (EdgeId e : edges) ++sol.demand[e];
  sol.nets[net].edges = std::move(edges);
}

std::vector<std::int32_t> recompute_demand(const Design& d, const RouteSolution& sol) {
  std::vector<std::int32_t> demand(d.grid.edge_count(), 0);
  for (const NetRoute& r : sol.nets)
    for (EdgeId e : r.edges) ++demand[e];
  return demand;
}

bool net_connected(const Design& d, const RouteSolution& sol, std::size_t net) {
  const Net& n = d.nets[net];
  if (n.pins.size() < 2) return true;
  const GcellGrid& g = d.grid;
  std::unordered_map<std::size_t, std::size_t> local;
  const auto key = [&](const GridPoint& p) {
    return (std::size_t(p.layer) * std::size_t(g.ny()) + std::size_t(p.y)) * std::size_t(g.nx()) + std::size_t(p.x);
  };
  const auto slot = [&](const GridPoint& p) { return local.try_emplace(key(p), local.size()).first->second; };
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (EdgeId e : sol.nets[net].edges) links.emplace_back(slot(g.tail(e)), slot(g.head(e)));
  std::vector<std::size_t> pins;
  for (const Point& p : n.pins) pins.push_back(slot({p.x, p.y, 0}));
  UnionFind uf(local.size());
  for (auto [a, b] : links) uf.unite(a, b);
  const std::size_t root = uf.find(pins.front());
  return std::all_of(pins.begin(), pins.end(), [&](std::size_t p) { return uf.find(p) == root; });
}

std::int64_t net_violation(const Design& d, const RouteSolution& sol, std::size_t net) {
  std::int64_t v = 0;
  for (EdgeId e : sol.nets[net].edges) v += d.grid.blocked(e) ? 1 : 0;
  return v;
}

std::int64_t net_overflow_edges(const Design& d, const RouteSolution& sol, std::size_t net) {
  std::int64_t v = 0;
  for (EdgeId e : sol.nets[net].edges)
    if (!d.grid.blocked(e) && sol.demand[e] > d.grid.capacity(e)) ++v;
  return v;
}

Metrics evaluate(const Design& d, const RouteSolution& sol, const CostWeights& w) {
  Metrics m;
  for (std::size_t n = 0; n < sol.nets.size(); ++n) {
    if (!net_connected(d, sol, n)) throw DisconnectedNet(d.nets[n].name);
    for (EdgeId e : sol.nets[n].edges) (d.grid.is_via(e) ? m.vias : m.wirelength) += 1;
  }
  const std::vector<std::int32_t> demand = recompute_demand(d, sol);
  const kernels::OverflowTotals t = kernels::overflow_totals(demand, d.grid.capacity(), d.grid.blocked());
  m.overflow = t.overflow;
  m.violation = t.violation;
  m.total_cost = double(m.wirelength) + w.via_cost * double(m.vias) + w.alpha_ow * double(m.overflow) +
                 w.alpha_ov * double(m.violation);
  return m;
}

namespace {

// Reroutes `net` on a graph of the given kind; the new route is kept only
// when it is cheaper than the old one under the same demand.
bool reroute(const Design& d, RouteSolution& sol, std::size_t net, GraphKind kind, const RouteParams& params) {
  std::vector<EdgeId> old = sol.nets[net].edges;
  rip_up(sol, net);
  const SparseGraph g = build_sparse_graph(kind, d, net, sol, params);
  try {
    std::vector<EdgeId> fresh = maze_route(d, net, g, sol.demand, params.weights);
    if (route_cost(d, fresh, sol.demand, params.weights) < route_cost(d, old, sol.demand, params.weights)) {
      commit(sol, net, std::move(fresh));
      return true;
    }
  } catch (const Unreachable&) {
  }
  commit(sol, net, std::move(old));
  return false;
}

std::vector<std::size_t> by_priority(const Design& d, const RouteSolution& sol, const CostWeights& w,
                                     bool overflow_too) {
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t n = 0; n < d.nets.size(); ++n) {
    const std::int64_t ov = net_violation(d, sol, n);
    const std::int64_t of = overflow_too ? net_overflow_edges(d, sol, n) : 0;
    if (ov == 0 && of == 0) continue;
    keyed.push_back({w.alpha_ov * double(ov) + w.alpha_ow * double(of), n});
  }
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return d.nets[a.second].name < d.nets[b.second].name;
  });
  std::vector<std::size_t> out;
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

}  // namespace

RrrReport rip_up_reroute(const Design& d, RouteSolution& sol, const RouteParams& params) {
  RrrReport rep;
  const GraphKind main_kind = params.guided ? GraphKind::Guided : GraphKind::Ordinary;

  auto t0 = Clock::now();
  StageReport maze;
  maze.name = params.guided ? "guided_maze" : "ordinary_maze";
  for (int it = 0; it < params.iterations; ++it) {
    const std::vector<std::size_t> victims = by_priority(d, sol, params.weights, true);
    if (victims.empty()) {
      rep.converged = true;
      break;
    }
    std::size_t changed = 0;
    for (std::size_t n : victims) changed += reroute(d, sol, n, main_kind, params) ? 1 : 0;
    maze.nets_rerouted += changed;
    ++rep.iterations_run;
    if (changed == 0) break;
  }
  if (!rep.converged) rep.converged = by_priority(d, sol, params.weights, true).empty();
  maze.metrics = evaluate(d, sol, params.weights);
  const auto t1 = Clock::now();
  maze.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.stages.push_back(maze);

  StageReport aware;
  aware.name = "obstacle_aware_maze";
  t0 = t1;
  if (params.obstacle_aware) {
    for (std::size_t n : by_priority(d, sol, params.weights, false))
      aware.nets_rerouted += reroute(d, sol, n, GraphKind::ObstacleAware, params) ? 1 : 0;
    aware.metrics = evaluate(d, sol, params.weights);
  }
  aware.runtime_ms = ms_since(t0);
  rep.stages.push_back(aware);
  return rep;
}

FlowResult run_flow(const Design& d, const RouteParams& params) {
  FlowResult r;
  const auto t0 = Clock::now();
  StageReport oarsmt{"oarsmt", 0.0, std::nullopt, d.nets.size()};
  StageReport pattern{"pattern", 0.0, std::nullopt, d.nets.size()};
  r.solution = initial_route(d, params, &oarsmt.runtime_ms, &pattern.runtime_ms);
  const auto te = Clock::now();
  r.initial = evaluate(d, r.solution, params.weights);
  pattern.runtime_ms += ms_since(te);
  pattern.metrics = r.initial;
  r.stages = {oarsmt, pattern};
  RrrReport rrr = rip_up_reroute(d, r.solution, params);
  for (auto& s : rrr.stages) r.stages.push_back(std::move(s));
  r.iterations_run = rrr.iterations_run;
  r.converged = rrr.converged;
  r.final = r.stages.back().metrics.value_or(*r.stages[2].metrics);
  r.total_ms = ms_since(t0);
  return r;
}

nlohmann::json metrics_json(const Metrics& m) {
  return {{"WL", m.wirelength}, {"vias", m.vias}, {"OW", m.overflow}, {"OV", m.violation}, {"cost", m.total_cost}};
}

nlohmann::json flow_json(const Design& d, const FlowResult& r, bool with_runtime) {
  nlohmann::json j;
  j["design"] = d.name;
  j["nets"] = d.nets.size();
  j["initial"] = metrics_json(r.initial);
  j["final"] = metrics_json(r.final);
  j["iterations"] = r.iterations_run;
  j["converged"] = r.converged;
  j["stages"] = nlohmann::json::array();
  for (const StageReport& s : r.stages) {
    nlohmann::json st{{"name", s.name}, {"nets", s.nets_rerouted}};
    st["metrics"] = s.metrics ? metrics_json(*s.metrics) : nlohmann::json(nullptr);
    if (with_runtime) st["runtime_ms"] = s.runtime_ms;
    j["stages"].push_back(std::move(st));
  }
  if (with_runtime) j["runtime_ms"] = r.total_ms;
  return j;
}

}  // namespace oar::groute
