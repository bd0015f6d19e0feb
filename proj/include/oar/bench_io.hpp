#pragma once

// Instance files, random instance generation and SVG rendering.
//
// Canonical text format (LF line endings, '#' starts a comment):
//   bounds <x_lo> <y_lo> <x_hi> <y_hi>
//   pins <m>
//   <x> <y>                                  (m lines)
//   obstacles <n>
//   <x_lo> <y_lo> <x_hi> <y_hi>              (n lines)

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oar/geometry.hpp"
#include "oar/rect_tree.hpp"

namespace oar {

struct Instance {
  std::string name;
  Rect bounds;
  std::vector<Point> pins;
  std::vector<Rect> obstacles;

  friend bool operator==(const Instance&, const Instance&) = default;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Unsatisfiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts the canonical format, or the common count-prefixed pin/obstacle
/// list layout of the published OARSMT benchmarks. Validates the result.
Instance parse_bench(std::string_view text, std::string name = {});
std::string write_bench(const Instance& inst);
Instance read_bench_file(const std::filesystem::path& path);
void write_bench_file(const std::filesystem::path& path, const Instance& inst);

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

/// Throws ValidationError: duplicate pins, pins strictly inside obstacles,
/// zero-area or overlapping obstacles, anything outside the bounds.
void validate(const Instance& inst);

struct GenSpec {
  int pin_count = 10;
  int obstacle_count = 10;
  double density = 0.1;  // fraction of the layout covered by obstacles
  Rect bounds{{0, 0}, {1000, 1000}};
  std::uint64_t seed = 0;
};

/// Obstacles are placed one per cell of a random k-d partition of the
/// layout, sized to the requested density and kept off the cell borders so
/// free space stays connected. Pins are uniform over free space.
/// Throws Unsatisfiable when the density cannot be met within 2%.
Instance gen_random(const GenSpec& spec);

/// Small instances for exact comparison: up to `max_pins` pins and
/// `max_obstacles` separated obstacles on a `size` x `size` layout.
Instance gen_small(std::uint64_t seed, int max_pins = 5, int max_obstacles = 4, Coord size = 12);

double coverage(const Instance& inst);

struct SvgLayer {
  std::string color;
  std::vector<Segment> segments;
  double width = 2.0;
};

/// SVG 1.1 drawing: frame, obstacles in gray, pins as dots, then each layer.
std::string render_svg(const Instance& inst, std::span<const SvgLayer> layers = {});
std::string render_svg(const Instance& inst, const RectTree& tree);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace oar
