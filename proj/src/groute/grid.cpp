#include "oar/groute/grid.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "oar/rng.hpp"

namespace oar::groute {

GcellGrid::GcellGrid(Coord nx, Coord ny, int layers, std::vector<std::int32_t> layer_capacity)
    : nx_(nx), ny_(ny), layers_(layers), layer_capacity_(std::move(layer_capacity)) {
  if (nx < 2 || ny < 2) throw DesignError("grid must be at least 2x2");
  if (layers < 3) throw DesignError("need a pin layer plus one horizontal and one vertical layer");
  if (layer_capacity_.size() != std::size_t(layers)) throw DesignError("one capacity per layer expected");
  std::size_t offset = 0;
  layer_offset_.assign(std::size_t(layers), 0);
  for (int l = 1; l < layers; ++l) {
    layer_offset_[std::size_t(l)] = offset;
    const std::size_t count = dir(l) == LayerDir::Horizontal ? std::size_t(nx - 1) * ny : std::size_t(nx) * (ny - 1);
    if (layer_capacity_[std::size_t(l)] < 0) throw DesignError("negative capacity");
    capacity_.insert(capacity_.end(), count, layer_capacity_[std::size_t(l)]);
    offset += count;
  }
  via_offset_ = EdgeId(offset);
  capacity_.insert(capacity_.end(), std::size_t(layers - 1) * nx * ny, std::numeric_limits<std::int32_t>::max() / 2);
  blocked_.assign(capacity_.size(), 0);
  cell_blocked_.assign(std::size_t(nx) * ny, 0);
}

EdgeId GcellGrid::wire(Coord x, Coord y, int layer) const {
  const std::size_t base = layer_offset_[std::size_t(layer)];
  if (dir(layer) == LayerDir::Horizontal) return EdgeId(base + std::size_t(y) * (nx_ - 1) + x);
  return EdgeId(base + std::size_t(x) * (ny_ - 1) + y);
}

EdgeId GcellGrid::via(Coord x, Coord y, int lower_layer) const {
  return EdgeId(via_offset_ + (std::size_t(lower_layer) * ny_ + y) * nx_ + x);
}

GridPoint GcellGrid::tail(EdgeId e) const {
  if (is_via(e)) {
    const std::size_t k = e - via_offset_;
    const std::size_t plane = std::size_t(nx_) * ny_;
    return {Coord(k % plane % nx_), Coord(k % plane / nx_), int(k / plane)};
  }
  int l = layers_ - 1;
  while (layer_offset_[std::size_t(l)] > e) --l;
  const std::size_t k = e - layer_offset_[std::size_t(l)];
  if (dir(l) == LayerDir::Horizontal) return {Coord(k % (nx_ - 1)), Coord(k / (nx_ - 1)), l};
  return {Coord(k / (ny_ - 1)), Coord(k % (ny_ - 1)), l};
}

GridPoint GcellGrid::head(EdgeId e) const {
  GridPoint p = tail(e);
  if (is_via(e))
    ++p.layer;
  else if (dir(p.layer) == LayerDir::Horizontal)
    ++p.x;
  else
    ++p.y;
  return p;
}

void GcellGrid::block_cell(Coord x, Coord y) {
  cell_blocked_[std::size_t(y) * nx_ + x] = 1;
  const auto block = [&](EdgeId e) {
    blocked_[e] = 1;
    capacity_[e] = 0;
  };
  for (int l = 1; l < layers_; ++l) {
    if (dir(l) == LayerDir::Horizontal) {
      if (x > 0) block(wire(x - 1, y, l));
      if (x + 1 < nx_) block(wire(x, y, l));
    } else {
      if (y > 0) block(wire(x, y - 1, l));
      if (y + 1 < ny_) block(wire(x, y, l));
    }
  }
  // Vias keep their capacity; any use still counts as a violation.
  for (int l = 0; l + 1 < layers_; ++l) blocked_[via(x, y, l)] = 1;
}

namespace {

void finish(Design& d) {
  for (const Rect& r : d.obstacles) {
    if (!r.has_area() || r.lo.x < 0 || r.lo.y < 0 || r.hi.x > d.grid.nx() || r.hi.y > d.grid.ny())
      throw DesignError("obstacle outside the grid or empty");
    for (Coord y = r.lo.y; y < r.hi.y; ++y)
      for (Coord x = r.lo.x; x < r.hi.x; ++x) d.grid.block_cell(x, y);
  }
  std::unordered_set<std::string> names;
  for (Net& n : d.nets) {
    if (!names.insert(n.name).second) throw DesignError("duplicate net name " + n.name);
    std::vector<Point> unique;
    for (const Point& p : n.pins) {
      if (!d.grid.in_grid(p.x, p.y)) throw DesignError("net " + n.name + " has a pin outside the grid");
      if (d.grid.cell_blocked(p.x, p.y)) throw DesignError("net " + n.name + " has a pin on an obstacle");
      if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
    }
    if (unique.empty()) throw DesignError("net " + n.name + " has no pins");
    n.pins = std::move(unique);
  }
}

}  // namespace

Design design_from_json(const nlohmann::json& j) {
  Design d;
  try {
    d.name = j.value("name", std::string("design"));
    const auto& dims = j.at("dims");
    const Coord nx = dims.at(0).get<Coord>(), ny = dims.at(1).get<Coord>();
    const int layers = j.at("layers").get<int>();
    std::vector<std::int32_t> cap(std::size_t(std::max(layers, 0)), 0);
    const auto& c = j.at("edge_capacity");
    if (c.is_array()) {
      if (c.size() != cap.size()) throw DesignError("edge_capacity needs one entry per layer");
      for (std::size_t l = 0; l < cap.size(); ++l) cap[l] = c.at(l).get<std::int32_t>();
    } else {
      std::fill(cap.begin(), cap.end(), c.get<std::int32_t>());
    }
    if (!cap.empty()) cap[0] = 0;
    d.grid = GcellGrid(nx, ny, layers, std::move(cap));
    for (const auto& r : j.value("obstacles", nlohmann::json::array()))
      d.obstacles.push_back({{r.at(0).get<Coord>(), r.at(1).get<Coord>()}, {r.at(2).get<Coord>(), r.at(3).get<Coord>()}});
    for (const auto& n : j.at("nets")) {
      Net net;
      net.name = n.at("name").get<std::string>();
      for (const auto& p : n.at("pins")) net.pins.push_back({p.at(0).get<Coord>(), p.at(1).get<Coord>()});
      d.nets.push_back(std::move(net));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DesignError(std::string("bad design JSON: ") + e.what());
  }
  finish(d);
  return d;
}

nlohmann::json to_json(const Design& d) {
  nlohmann::json j;
  j["name"] = d.name;
  j["dims"] = {d.grid.nx(), d.grid.ny()};
  j["layers"] = d.grid.layers();
  j["edge_capacity"] = nlohmann::json::array();
  for (int l = 0; l < d.grid.layers(); ++l) j["edge_capacity"].push_back(d.grid.layer_capacity(l));
  j["obstacles"] = nlohmann::json::array();
  for (const Rect& r : d.obstacles) j["obstacles"].push_back({r.lo.x, r.lo.y, r.hi.x, r.hi.y});
  j["nets"] = nlohmann::json::array();
  for (const Net& n : d.nets) {
    nlohmann::json pins = nlohmann::json::array();
    for (const Point& p : n.pins) pins.push_back({p.x, p.y});
    j["nets"].push_back({{"name", n.name}, {"pins", pins}});
  }
  return j;
}

Design read_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DesignError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DesignError(path + ": " + e.what());
  }
  return design_from_json(j);
}

Design gen_design(const DesignSpec& spec) {
  Rng rng(derive_seed(spec.seed, 101));
  const std::int32_t cap = std::int32_t(rng.uniform(spec.min_capacity, spec.max_capacity));
  std::vector<std::int32_t> caps(std::size_t(spec.layers), cap);
  caps[0] = 0;
  Design d;
  d.name = "synth_s" + std::to_string(spec.seed);
  d.grid = GcellGrid(spec.nx, spec.ny, spec.layers, caps);

  // Macros keep at least one free cell between each other. Most are placed
  // one or two cells from an existing macro, forming narrow channels.
  const int want_obstacles = int(rng.uniform(spec.min_obstacles, spec.max_obstacles));
  const Coord max_side = std::max<Coord>(3, std::min(spec.nx, spec.ny) / 5);
  for (int tries = 0; int(d.obstacles.size()) < want_obstacles && tries < 20000; ++tries) {
    const Coord w = Coord(rng.uniform(2, max_side)), h = Coord(rng.uniform(2, max_side));
    Coord x = Coord(rng.uniform(1, spec.nx - 1 - w)), y = Coord(rng.uniform(1, spec.ny - 1 - h));
    if (!d.obstacles.empty() && rng.uniform(0, 3) != 0) {
      const Rect& n = d.obstacles[std::size_t(rng.uniform(0, std::int64_t(d.obstacles.size()) - 1))];
      const Coord gap = Coord(rng.uniform(1, 2));
      switch (rng.uniform(0, 3)) {
        case 0: x = n.hi.x + gap; y = Coord(rng.uniform(n.lo.y - h + 1, n.hi.y - 1)); break;
        case 1: x = n.lo.x - gap - w; y = Coord(rng.uniform(n.lo.y - h + 1, n.hi.y - 1)); break;
        case 2: y = n.hi.y + gap; x = Coord(rng.uniform(n.lo.x - w + 1, n.hi.x - 1)); break;
        default: y = n.lo.y - gap - h; x = Coord(rng.uniform(n.lo.x - w + 1, n.hi.x - 1)); break;
      }
      if (x < 1 || y < 1 || x + w > spec.nx - 1 || y + h > spec.ny - 1) continue;
    }
    const Rect r{{x, y}, {x + w, y + h}};
    const Rect halo{{x - 1, y - 1}, {x + w + 1, y + h + 1}};
    bool ok = true;
    for (const Rect& o : d.obstacles) ok = ok && !touches_interior(halo, o);
    if (ok) d.obstacles.push_back(r);
  }
  std::vector<std::uint8_t> blocked(std::size_t(spec.nx) * spec.ny, 0);
  for (const Rect& r : d.obstacles)
    for (Coord yy = r.lo.y; yy < r.hi.y; ++yy)
      for (Coord xx = r.lo.x; xx < r.hi.x; ++xx) blocked[std::size_t(yy) * spec.nx + xx] = 1;
  // Pins go only into the largest free region, so every net is routable.
  std::vector<int> region(blocked.size(), -1);
  std::vector<std::size_t> region_size;
  for (std::size_t start = 0; start < blocked.size(); ++start) {
    if (blocked[start] || region[start] >= 0) continue;
    const int id = int(region_size.size());
    std::size_t size = 0;
    std::deque<std::size_t> queue{start};
    region[start] = id;
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      ++size;
      const Coord cx = Coord(c % spec.nx), cy = Coord(c / spec.nx);
      for (const Point q : {Point{cx + 1, cy}, Point{cx - 1, cy}, Point{cx, cy + 1}, Point{cx, cy - 1}}) {
        if (q.x < 0 || q.y < 0 || q.x >= spec.nx || q.y >= spec.ny) continue;
        const std::size_t k = std::size_t(q.y) * spec.nx + q.x;
        if (blocked[k] || region[k] >= 0) continue;
        region[k] = id;
        queue.push_back(k);
      }
    }
    region_size.push_back(size);
  }
  const int main_region =
      int(std::max_element(region_size.begin(), region_size.end()) - region_size.begin());
  const auto free_cell = [&](Point p) {
    return p.x >= 0 && p.y >= 0 && p.x < spec.nx && p.y < spec.ny &&
           region[std::size_t(p.y) * spec.nx + p.x] == main_region;
  };
  // A cell touching a random side of a random macro.
  const auto macro_pin = [&]() -> Point {
    const Rect& r = d.obstacles[std::size_t(rng.uniform(0, std::int64_t(d.obstacles.size()) - 1))];
    switch (rng.uniform(0, 3)) {
      case 0: return {r.lo.x - 1, Coord(rng.uniform(r.lo.y, r.hi.y - 1))};
      case 1: return {r.hi.x, Coord(rng.uniform(r.lo.y, r.hi.y - 1))};
      case 2: return {Coord(rng.uniform(r.lo.x, r.hi.x - 1)), r.lo.y - 1};
      default: return {Coord(rng.uniform(r.lo.x, r.hi.x - 1)), r.hi.y};
    }
  };

  const int want_nets = int(rng.uniform(spec.min_nets, spec.max_nets));
  for (int n = 0; n < want_nets; ++n) {
    Net net;
    char buf[16];
    std::snprintf(buf, sizeof buf, "n%04d", n);
    net.name = buf;
    static constexpr int kPinWeights[] = {2, 2, 2, 3, 3, 4, 5, 6};
    const int pins = kPinWeights[rng.uniform(0, 7)];
    const Coord span = Coord(rng.uniform(4, std::max<Coord>(5, std::min(spec.nx, spec.ny) / 3)));
    const Coord cx = Coord(rng.uniform(0, spec.nx - 1)), cy = Coord(rng.uniform(0, spec.ny - 1));
    for (int tries = 0; int(net.pins.size()) < pins && tries < 1000; ++tries) {
      Point p;
      if (!d.obstacles.empty() && rng.uniform(0, 4) == 0) {
        p = macro_pin();
      } else {
        p = {Coord(std::clamp<std::int64_t>(cx + rng.uniform(-span / 2, span / 2), 0, spec.nx - 1)),
             Coord(std::clamp<std::int64_t>(cy + rng.uniform(-span / 2, span / 2), 0, spec.ny - 1))};
      }
      if (!free_cell(p) || std::find(net.pins.begin(), net.pins.end(), p) != net.pins.end()) continue;
      net.pins.push_back(p);
    }
    if (net.pins.size() >= 2) d.nets.push_back(std::move(net));
  }
  finish(d);
  return d;
}

bool dense_reachable(const Design& d, const Net& net) {
  const GcellGrid& g = d.grid;
  std::vector<std::uint8_t> seen(std::size_t(g.nx()) * g.ny(), 0);
  std::deque<Point> queue{net.pins.front()};
  seen[std::size_t(net.pins.front().y) * g.nx() + net.pins.front().x] = 1;
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    for (const Point q : {Point{p.x + 1, p.y}, Point{p.x - 1, p.y}, Point{p.x, p.y + 1}, Point{p.x, p.y - 1}}) {
      if (!g.in_grid(q.x, q.y) || g.cell_blocked(q.x, q.y)) continue;
      auto& s = seen[std::size_t(q.y) * g.nx() + q.x];
      if (s) continue;
      s = 1;
      queue.push_back(q);
    }
  }
  return std::all_of(net.pins.begin(), net.pins.end(),
                     [&](const Point& p) { return seen[std::size_t(p.y) * g.nx() + p.x] != 0; });
}

}  // namespace oar::groute
