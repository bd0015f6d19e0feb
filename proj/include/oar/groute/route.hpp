#pragma once
// Obstacle-avoiding global routing: initial routing from per-net OARSMTs,
// OARSMT-guided sparse maze rip-up and reroute, and a final obstacle-aware
// sparse maze pass for nets still crossing obstacles.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oar/groute/grid.hpp"

namespace oar::groute {

struct CostWeights {
  double alpha_ow = 500.0;
  double alpha_ov = 1e7;
  double via_cost = 2.0;
  double overflow_slope = 1.0;
};

/// Smooth stand-in for the step "one more unit on this edge overflows it".
double logistic_overflow(std::int32_t demand, std::int32_t capacity, double slope);

struct RouteParams {
  CostWeights weights;
  int iterations = 10;
  Coord stride = 4;       // ordinary sparse graph keeps every stride-th line
  Coord guided_width = 1; // extra lines on each side of an OARSMT edge
  bool guided = true;
  bool obstacle_aware = true;
  bool congestion_aware_patterns = true;
  std::uint64_t seed = 0;
};

struct NetRoute {
  std::vector<EdgeId> edges;  // sorted, unique
  std::vector<Segment> guide; // the net's initial 2D OARSMT
};

struct Metrics {
  std::int64_t wirelength = 0;
  std::int64_t vias = 0;
  std::int64_t overflow = 0;
  std::int64_t violation = 0;
  double total_cost = 0.0;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct RouteSolution {
  std::vector<NetRoute> nets;       // parallel to Design::nets
  std::vector<std::int32_t> demand; // per grid edge
};

enum class GraphKind : std::uint8_t { Ordinary, Guided, ObstacleAware };
const char* graph_kind_name(GraphKind k);

struct SparseGraph {
  GraphKind kind = GraphKind::Ordinary;
  std::vector<Coord> xs;  // kept vertical lines, ascending
  std::vector<Coord> ys;  // kept horizontal lines, ascending
};

class Unreachable : public std::runtime_error {
 public:
  explicit Unreachable(const std::string& net) : std::runtime_error("net " + net + " has an unreachable pin") {}
};

/// Per net: OARSMT over the obstacles touching the pin bounding box, then L/Z
/// pattern selection per two-pin connection and greedy layer assignment.
/// Stage times are written to the optional outputs.
RouteSolution initial_route(const Design& d, const RouteParams& params, double* oarsmt_ms = nullptr,
                            double* pattern_ms = nullptr);

SparseGraph build_sparse_graph(GraphKind kind, const Design& d, std::size_t net, const RouteSolution& sol,
                               const RouteParams& params);

/// Cheapest tree found by growing from the first pin and repeatedly joining
/// the nearest unconnected pin by Dijkstra. The net's own current edges must
/// already be ripped up from `demand`.
std::vector<EdgeId> maze_route(const Design& d, std::size_t net, const SparseGraph& g,
                               const std::vector<std::int32_t>& demand, const CostWeights& w);

/// Cost of a route under the maze-routing edge costs and the given demand.
double route_cost(const Design& d, const std::vector<EdgeId>& edges, const std::vector<std::int32_t>& demand,
                  const CostWeights& w);

void rip_up(RouteSolution& sol, std::size_t net);
void commit(RouteSolution& sol, std::size_t net, std::vector<EdgeId> edges);

struct StageReport {
  std::string name;
  double runtime_ms = 0.0;
  std::optional<Metrics> metrics;  // after the stage, when it changes routes
  std::size_t nets_rerouted = 0;
};

struct RrrReport {
  std::vector<StageReport> stages;
  int iterations_run = 0;
  bool converged = false;
};

/// Guided (or ordinary, when guided routing is off) rip-up and reroute for
/// nets with violations or overflow, then obstacle-aware rerouting of nets
/// still crossing obstacles.
RrrReport rip_up_reroute(const Design& d, RouteSolution& sol, const RouteParams& params);

/// Recomputes everything from the routed edges. Throws DisconnectedNet.
Metrics evaluate(const Design& d, const RouteSolution& sol, const CostWeights& w);

std::int64_t net_violation(const Design& d, const RouteSolution& sol, std::size_t net);
std::int64_t net_overflow_edges(const Design& d, const RouteSolution& sol, std::size_t net);
bool net_connected(const Design& d, const RouteSolution& sol, std::size_t net);
std::vector<std::int32_t> recompute_demand(const Design& d, const RouteSolution& sol);

struct FlowResult {
  RouteSolution solution;
  Metrics initial;
  Metrics final;
  std::vector<StageReport> stages;  // OARSMT, pattern, guided maze, obstacle-aware maze
  double total_ms = 0.0;
  int iterations_run = 0;
  bool converged = false;
};

FlowResult run_flow(const Design& d, const RouteParams& params);

nlohmann::json metrics_json(const Metrics& m);
/// Stable metrics document. Runtimes are included only when asked, so that
/// reruns can be compared byte for byte.
nlohmann::json flow_json(const Design& d, const FlowResult& r, bool with_runtime);

}  // namespace oar::groute
