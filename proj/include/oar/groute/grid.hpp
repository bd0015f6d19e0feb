#pragma once
// GCell grid, designs and their JSON form.
//
// Layer 0 is pin access only. Layers 1, 2, ... alternate horizontal and
// vertical, starting with horizontal. Obstacles block every layer.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oar/geometry.hpp"

namespace oar::groute {

using EdgeId = std::uint32_t;

enum class LayerDir : std::uint8_t { None, Horizontal, Vertical };

struct GridPoint {
  Coord x = 0, y = 0;
  int layer = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DisconnectedNet : public std::runtime_error {
 public:
  explicit DisconnectedNet(const std::string& net) : std::runtime_error("net " + net + " is not connected") {}
};

/// Edge arrays are flat: wire edges of every routing layer first, then vias
/// between layer l and l + 1. Via capacity is unbounded.
class GcellGrid {
 public:
  GcellGrid() = default;
  GcellGrid(Coord nx, Coord ny, int layers, std::vector<std::int32_t> layer_capacity);

  Coord nx() const { return nx_; }
  Coord ny() const { return ny_; }
  int layers() const { return layers_; }
  LayerDir dir(int layer) const {
    if (layer <= 0) return LayerDir::None;
    return layer % 2 == 1 ? LayerDir::Horizontal : LayerDir::Vertical;
  }
  bool in_grid(Coord x, Coord y) const { return x >= 0 && y >= 0 && x < nx_ && y < ny_; }

  std::size_t edge_count() const { return capacity_.size(); }
  /// Edge from (x, y) to (x + 1, y) on a horizontal layer or (x, y + 1) on a
  /// vertical one.
  EdgeId wire(Coord x, Coord y, int layer) const;
  EdgeId via(Coord x, Coord y, int lower_layer) const;
  bool is_via(EdgeId e) const { return e >= via_offset_; }
  /// Lower endpoint of the edge (smaller coordinate or lower layer).
  GridPoint tail(EdgeId e) const;
  GridPoint head(EdgeId e) const;

  void block_cell(Coord x, Coord y);
  bool cell_blocked(Coord x, Coord y) const { return cell_blocked_[std::size_t(y) * nx_ + x] != 0; }

  const std::vector<std::int32_t>& capacity() const { return capacity_; }
  const std::vector<std::uint8_t>& blocked() const { return blocked_; }
  std::int32_t capacity(EdgeId e) const { return capacity_[e]; }
  bool blocked(EdgeId e) const { return blocked_[e] != 0; }
  std::int32_t layer_capacity(int layer) const { return layer_capacity_[std::size_t(layer)]; }

 private:
  Coord nx_ = 0, ny_ = 0;
  int layers_ = 0;
  std::vector<std::int32_t> layer_capacity_;
  std::vector<std::size_t> layer_offset_;
  EdgeId via_offset_ = 0;
  std::vector<std::int32_t> capacity_;
  std::vector<std::uint8_t> blocked_;
  std::vector<std::uint8_t> cell_blocked_;
};

struct Net {
  std::string name;
  std::vector<Point> pins;  // GCell coordinates, distinct
};

/// Obstacles are half-open GCell ranges: lo.x <= x < hi.x, lo.y <= y < hi.y.
struct Design {
  std::string name;
  GcellGrid grid;
  std::vector<Net> nets;
  std::vector<Rect> obstacles;
};

Design design_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Design& d);
Design read_design_file(const std::string& path);

struct DesignSpec {
  Coord nx = 64, ny = 64;
  int layers = 4;
  int min_nets = 300, max_nets = 800;
  int min_obstacles = 10, max_obstacles = 40;
  int min_capacity = 2, max_capacity = 4;
  std::uint64_t seed = 0;
};

/// Synthetic design: separated rectangular macros, local nets with 2-6 pins,
/// some pins placed right next to a macro as macro pins are.
Design gen_design(const DesignSpec& spec);

/// Dense-grid reference: true when all pins of `net` lie in one 4-connected
/// component of the unblocked GCells.
bool dense_reachable(const Design& d, const Net& net);

}  // namespace oar::groute
