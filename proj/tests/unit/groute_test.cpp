#include <gtest/gtest.h>

#include <cmath>

#include "oar/groute/route.hpp"
#include "oar/oracle.hpp"

namespace oar::groute {
namespace {

using nlohmann::json;

Design make_design(Coord nx, Coord ny, int layers, int cap, json obstacles, json nets) {
  return design_from_json({{"name", "t"},
                           {"dims", {nx, ny}},
                           {"layers", layers},
                           {"edge_capacity", cap},
                           {"obstacles", std::move(obstacles)},
                           {"nets", std::move(nets)}});
}

json net(const std::string& name, std::vector<Point> pins) {
  json p = json::array();
  for (Point q : pins) p.push_back({q.x, q.y});
  return {{"name", name}, {"pins", p}};
}

// Vertical wall at x = 7 with a single open cell at y = 9.
Design wall_design() {
  return make_design(16, 16, 3, 4, json::array({{7, 0, 8, 9}, {7, 10, 8, 16}}),
                     json::array({net("a", {{2, 3}, {13, 3}})}));
}

TEST(Grid, EdgeIndexingRoundTrips) {
  const GcellGrid g(5, 4, 4, {0, 2, 3, 1});
  EXPECT_EQ(g.dir(0), LayerDir::None);
  EXPECT_EQ(g.dir(1), LayerDir::Horizontal);
  EXPECT_EQ(g.dir(2), LayerDir::Vertical);
  const EdgeId h = g.wire(2, 3, 1);
  EXPECT_EQ(g.tail(h), (GridPoint{2, 3, 1}));
  EXPECT_EQ(g.head(h), (GridPoint{3, 3, 1}));
  EXPECT_EQ(g.capacity(h), 2);
  const EdgeId v = g.wire(1, 2, 2);
  EXPECT_EQ(g.head(v), (GridPoint{1, 3, 2}));
  const EdgeId via = g.via(4, 3, 0);
  EXPECT_TRUE(g.is_via(via));
  EXPECT_FALSE(g.is_via(h));
  EXPECT_EQ(g.tail(via), (GridPoint{4, 3, 0}));
  EXPECT_EQ(g.head(via), (GridPoint{4, 3, 1}));
}

TEST(Grid, BlockedCellZeroesIncidentWires) {
  GcellGrid g(5, 5, 3, {0, 2, 2});
  g.block_cell(2, 2);
  EXPECT_TRUE(g.cell_blocked(2, 2));
  EXPECT_EQ(g.capacity(g.wire(1, 2, 1)), 0);
  EXPECT_EQ(g.capacity(g.wire(2, 2, 1)), 0);
  EXPECT_EQ(g.capacity(g.wire(2, 1, 2)), 0);
  EXPECT_TRUE(g.blocked(g.wire(2, 2, 2)));
  EXPECT_TRUE(g.blocked(g.via(2, 2, 1)));
  EXPECT_FALSE(g.blocked(g.wire(0, 0, 1)));
  EXPECT_EQ(g.capacity(g.wire(0, 0, 1)), 2);
}

TEST(Grid, DesignJsonErrors) {
  EXPECT_THROW(design_from_json(json{{"dims", {4, 4}}}), DesignError);
  EXPECT_THROW(make_design(8, 8, 3, 2, json::array({{2, 2, 4, 4}}), json::array({net("a", {{3, 3}, {6, 6}})})),
               DesignError);
  EXPECT_THROW(make_design(8, 8, 3, 2, json::array(), json::array({net("a", {{9, 3}, {6, 6}})})), DesignError);
  const Design d = make_design(8, 8, 3, 2, json::array(), json::array({net("a", {{1, 1}, {1, 1}, {2, 2}})}));
  EXPECT_EQ(d.nets[0].pins.size(), 2u);
  EXPECT_EQ(design_from_json(to_json(d)).nets[0].pins, d.nets[0].pins);
}

TEST(Cost, LogisticOverflowIsMonotone) {
  EXPECT_NEAR(logistic_overflow(2, 2, 1.0), 1.0 / (1.0 + std::exp(-0.5)), 1e-12);
  double prev = 0.0;
  for (int d = 0; d < 8; ++d) {
    const double v = logistic_overflow(d, 4, 1.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_LT(logistic_overflow(3, 4, 1.0), 0.5);
  EXPECT_GT(logistic_overflow(4, 4, 1.0), 0.5);
}

TEST(InitialRoute, TwoPinsOnEmptyGridIsManhattan) {
  const Design d = make_design(8, 8, 3, 2, json::array(), json::array({net("a", {{1, 1}, {6, 4}})}));
  const RouteSolution sol = initial_route(d, {});
  const Metrics m = evaluate(d, sol, {});
  EXPECT_EQ(m.wirelength, 8);
  // Up from the pin layer, one direction change, and two back down.
  EXPECT_EQ(m.vias, 4);
  EXPECT_EQ(m.overflow, 0);
  EXPECT_EQ(m.violation, 0);
}

TEST(InitialRoute, ThreadsTheGapInAWall) {
  const Design d = wall_design();
  const RouteSolution sol = initial_route(d, {});
  const Metrics m = evaluate(d, sol, {});
  EXPECT_EQ(m.violation, 0);
  EXPECT_EQ(m.wirelength, 11 + 2 * 6);
  RectTree t;
  for (const Segment& s : sol.nets[0].guide) t.add_edge(t.add_node(s.a, NodeRole::Corner), t.add_node(s.b, NodeRole::Corner));
  EXPECT_TRUE(check_legality(t, d.nets[0].pins, {}).connected);
}

TEST(InitialRoute, DetourOutsideBoundingBoxIsRepairedLater) {
  // The wall crosses the net's bounding box, so the initial tree goes over it,
  // straight through a second obstacle the tree never saw.
  const Design d = make_design(16, 16, 3, 4, json::array({{7, 0, 8, 9}, {5, 9, 10, 11}}),
                               json::array({net("a", {{2, 5}, {13, 5}})}));
  const RouteSolution sol = initial_route(d, {});
  EXPECT_GT(evaluate(d, sol, {}).violation, 0);
  const FlowResult r = run_flow(d, {});
  EXPECT_EQ(r.final.violation, 0);
}

TEST(Maze, ObstacleAwareGraphMatchesDenseGrid) {
  const Design d = wall_design();
  RouteSolution sol = initial_route(d, {});
  rip_up(sol, 0);
  RouteParams dense;
  dense.stride = 1;
  const CostWeights w;
  const auto g_dense = build_sparse_graph(GraphKind::Ordinary, d, 0, sol, dense);
  EXPECT_EQ(g_dense.xs.size(), 16u);
  const auto g_oa = build_sparse_graph(GraphKind::ObstacleAware, d, 0, sol, {});
  const auto e_dense = maze_route(d, 0, g_dense, sol.demand, w);
  const auto e_oa = maze_route(d, 0, g_oa, sol.demand, w);
  EXPECT_DOUBLE_EQ(route_cost(d, e_oa, sol.demand, w), route_cost(d, e_dense, sol.demand, w));
  commit(sol, 0, e_oa);
  EXPECT_EQ(net_violation(d, sol, 0), 0);
  EXPECT_TRUE(net_connected(d, sol, 0));
}

TEST(Maze, GraphsAreSupersetsOfOrdinary) {
  const Design d = gen_design({.nx = 32, .ny = 32, .min_nets = 40, .max_nets = 60, .seed = 4});
  const RouteSolution sol = initial_route(d, {});
  const RouteParams p;
  for (std::size_t n = 0; n < d.nets.size(); ++n) {
    const auto ord = build_sparse_graph(GraphKind::Ordinary, d, n, sol, p);
    for (GraphKind k : {GraphKind::Guided, GraphKind::ObstacleAware}) {
      const auto g = build_sparse_graph(k, d, n, sol, p);
      EXPECT_TRUE(std::includes(g.xs.begin(), g.xs.end(), ord.xs.begin(), ord.xs.end()));
      EXPECT_TRUE(std::includes(g.ys.begin(), g.ys.end(), ord.ys.begin(), ord.ys.end()));
    }
    const auto gd = build_sparse_graph(GraphKind::Guided, d, n, sol, p);
    for (const Segment& s : sol.nets[n].guide)
      for (Point q : {s.a, s.b}) {
        EXPECT_TRUE(std::binary_search(gd.xs.begin(), gd.xs.end(), q.x));
        EXPECT_TRUE(std::binary_search(gd.ys.begin(), gd.ys.end(), q.y));
      }
  }
}

TEST(Maze, GuidedNeverWorseForTwoPinNets) {
  const Design d = gen_design({.nx = 32, .ny = 32, .min_nets = 80, .max_nets = 120, .seed = 2});
  RouteSolution sol = initial_route(d, {});
  const RouteParams p;
  int compared = 0;
  for (std::size_t n = 0; n < d.nets.size(); ++n) {
    if (d.nets[n].pins.size() != 2) continue;
    const auto saved = sol.nets[n].edges;
    rip_up(sol, n);
    const auto eo = maze_route(d, n, build_sparse_graph(GraphKind::Ordinary, d, n, sol, p), sol.demand, p.weights);
    const auto eg = maze_route(d, n, build_sparse_graph(GraphKind::Guided, d, n, sol, p), sol.demand, p.weights);
    EXPECT_LE(route_cost(d, eg, sol.demand, p.weights), route_cost(d, eo, sol.demand, p.weights) + 1e-6);
    commit(sol, n, saved);
    ++compared;
  }
  EXPECT_GT(compared, 10);
}

TEST(Maze, BoxedInPinPaysTheObstaclePenalty) {
  // Pin (0,0) is closed off by obstacle cells; blocked edges stay usable at
  // the violation weight, so the net still routes.
  const Design d = make_design(8, 8, 3, 2, json::array({{1, 0, 2, 2}, {0, 1, 1, 2}}),
                               json::array({net("a", {{0, 0}, {5, 5}})}));
  EXPECT_FALSE(dense_reachable(d, d.nets[0]));
  const FlowResult r = run_flow(d, {});
  EXPECT_TRUE(net_connected(d, r.solution, 0));
  EXPECT_GT(r.final.violation, 0);
}

TEST(Evaluate, EmptySolutionIsZero) {
  const Design d = make_design(8, 8, 3, 2, json::array(), json::array());
  RouteSolution sol;
  sol.demand.assign(d.grid.edge_count(), 0);
  EXPECT_EQ(evaluate(d, sol, {}), Metrics{});
}

TEST(Evaluate, CapacityOneConflict) {
  const Design d = make_design(4, 4, 3, 1, json::array(), json::array({net("a", {{0, 0}, {1, 0}}), net("b", {{0, 0}, {1, 0}})}));
  const GcellGrid& g = d.grid;
  RouteSolution sol;
  sol.nets.resize(2);
  sol.demand.assign(g.edge_count(), 0);
  std::vector<EdgeId> edges{g.wire(0, 0, 1), g.via(0, 0, 0), g.via(1, 0, 0)};
  std::sort(edges.begin(), edges.end());
  commit(sol, 0, edges);
  commit(sol, 1, edges);
  const CostWeights w;
  const Metrics m = evaluate(d, sol, w);
  EXPECT_EQ(m.wirelength, 2);
  EXPECT_EQ(m.vias, 4);
  EXPECT_EQ(m.overflow, 1);
  EXPECT_EQ(m.violation, 0);
  EXPECT_DOUBLE_EQ(m.total_cost, 2 + w.via_cost * 4 + w.alpha_ow * 1);
  EXPECT_EQ(net_overflow_edges(d, sol, 0), 1);
}

TEST(Evaluate, SingleNetOfLengthSeven) {
  const Design d = make_design(10, 10, 3, 2, json::array(), json::array({net("a", {{0, 0}, {7, 0}})}));
  const RouteSolution sol = initial_route(d, {});
  const Metrics m = evaluate(d, sol, {});
  EXPECT_EQ(m.wirelength, 7);
  EXPECT_DOUBLE_EQ(m.total_cost, 7 + 2.0 * double(m.vias));
}

TEST(Evaluate, DisconnectedNetThrows) {
  const Design d = make_design(8, 8, 3, 2, json::array(), json::array({net("a", {{0, 0}, {5, 0}})}));
  RouteSolution sol = initial_route(d, {});
  sol.nets[0].edges.pop_back();
  sol.demand = recompute_demand(d, sol);
  EXPECT_FALSE(net_connected(d, sol, 0));
  EXPECT_THROW(evaluate(d, sol, {}), DisconnectedNet);
}

TEST(Flow, DemandBookkeepingMatchesRecompute) {
  const Design d = gen_design({.nx = 32, .ny = 32, .min_nets = 150, .max_nets = 200, .min_capacity = 1,
                               .max_capacity = 2, .seed = 5});
  const FlowResult r = run_flow(d, {});
  EXPECT_EQ(r.solution.demand, recompute_demand(d, r.solution));
  for (std::size_t n = 0; n < d.nets.size(); ++n) EXPECT_TRUE(net_connected(d, r.solution, n));
  EXPECT_LE(r.final.overflow, r.initial.overflow);
}

TEST(Flow, CleanSolutionIsAFixedPoint) {
  const Design d = make_design(16, 16, 3, 4, json::array({{6, 6, 9, 9}}),
                               json::array({net("a", {{1, 1}, {4, 12}}), net("b", {{12, 2}, {14, 14}, {10, 13}})}));
  RouteSolution sol = initial_route(d, {});
  const Metrics before = evaluate(d, sol, {});
  ASSERT_EQ(before.overflow, 0);
  ASSERT_EQ(before.violation, 0);
  const RouteSolution copy = sol;
  const RrrReport rep = rip_up_reroute(d, sol, {});
  EXPECT_TRUE(rep.converged);
  for (std::size_t n = 0; n < d.nets.size(); ++n) EXPECT_EQ(sol.nets[n].edges, copy.nets[n].edges);
  EXPECT_EQ(sol.demand, copy.demand);
}

TEST(Flow, DeterministicMetrics) {
  const Design d = gen_design({.nx = 32, .ny = 32, .min_nets = 100, .max_nets = 150, .seed = 8});
  const auto a = flow_json(d, run_flow(d, {}), false).dump();
  const auto b = flow_json(d, run_flow(d, {}), false).dump();
  EXPECT_EQ(a, b);
  const auto with = flow_json(d, run_flow(d, {}), true);
  ASSERT_TRUE(with.contains("runtime_ms"));
  ASSERT_EQ(with["stages"].size(), 4u);
  EXPECT_EQ(with["stages"][0]["name"], "oarsmt");
  EXPECT_EQ(with["stages"][3]["name"], "obstacle_aware_maze");
}

TEST(Flow, StageRuntimesSumToTotal) {
  const Design d = gen_design({.nx = 32, .ny = 32, .min_nets = 100, .max_nets = 150, .seed = 1});
  const FlowResult r = run_flow(d, {});
  double sum = 0;
  for (const StageReport& s : r.stages) sum += s.runtime_ms;
  EXPECT_NEAR(sum, r.total_ms, 0.01 * r.total_ms + 1e-3);
}

TEST(Generator, DeterministicAndReachable) {
  const DesignSpec spec{.nx = 32, .ny = 32, .min_nets = 50, .max_nets = 80, .seed = 3};
  const Design a = gen_design(spec), b = gen_design(spec);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_GE(a.nets.size(), 1u);
  for (const Net& n : a.nets) {
    EXPECT_GE(n.pins.size(), 2u);
    for (Point p : n.pins) EXPECT_FALSE(a.grid.cell_blocked(p.x, p.y));
    EXPECT_TRUE(dense_reachable(a, n));
  }
}

}  // namespace
}  // namespace oar::groute
