#include "oar/bench_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "oar/obstacle_index.hpp"
#include "oar/rng.hpp"

namespace oar {
namespace {

struct Line_ {
  std::size_t number;
  std::string text;
};

std::vector<Line_> content_lines(std::string_view text) {
  std::vector<Line_> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    std::string line(text.substr(pos, end - pos));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back({number, std::move(line)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

Coord to_coord(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw SyntaxError(line, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) throw SyntaxError(line, "expected an integer, got '" + tok + "'");
  if (v < std::numeric_limits<Coord>::min() || v > std::numeric_limits<Coord>::max())
    throw SyntaxError(line, "coordinate out of range: " + tok);
  return Coord(v);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

Instance parse_canonical(const std::vector<Line_>& lines, std::string name) {
  Instance inst;
  inst.name = std::move(name);
  std::size_t i = 0;
  const auto expect = [&](const char* keyword, std::size_t args) {
    if (i >= lines.size()) throw SyntaxError(lines.empty() ? 1 : lines.back().number + 1, std::string("missing '") + keyword + "'");
    auto toks = split_ws(lines[i].text);
    if (toks.empty() || toks[0] != keyword || toks.size() != args + 1)
      throw SyntaxError(lines[i].number, std::string("expected '") + keyword + "' with " + std::to_string(args) + " values");
    return toks;
  };
  const auto numbers = [&](std::size_t count) {
    if (i >= lines.size()) throw SyntaxError(lines.empty() ? 1 : lines.back().number + 1, "unexpected end of file");
    auto toks = split_ws(lines[i].text);
    if (toks.size() != count)
      throw SyntaxError(lines[i].number, "expected " + std::to_string(count) + " integers");
    std::vector<Coord> v;
    for (const auto& t : toks) v.push_back(to_coord(t, lines[i].number));
    return v;
  };
  const auto count_of = [&](const std::string& tok) {
    const Coord c = to_coord(tok, lines[i].number);
    if (c < 0) throw SyntaxError(lines[i].number, "negative count");
    return std::size_t(c);
  };

  auto b = expect("bounds", 4);
  inst.bounds = {{to_coord(b[1], lines[i].number), to_coord(b[2], lines[i].number)},
                 {to_coord(b[3], lines[i].number), to_coord(b[4], lines[i].number)}};
  if (!inst.bounds.valid()) throw SyntaxError(lines[i].number, "bounds have lo > hi");
  ++i;
  const std::size_t m = count_of(expect("pins", 1)[1]);
  ++i;
  for (std::size_t k = 0; k < m; ++k, ++i) {
    const auto v = numbers(2);
    inst.pins.push_back({v[0], v[1]});
  }
  const std::size_t n = count_of(expect("obstacles", 1)[1]);
  ++i;
  for (std::size_t k = 0; k < n; ++k, ++i) {
    const auto v = numbers(4);
    inst.obstacles.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  if (i != lines.size()) throw SyntaxError(lines[i].number, "trailing content");
  return inst;
}

// Count-prefixed lists as found in the published benchmark files: a pin
// count, pin coordinate lines, an obstacle count, obstacle corner lines.
// Keywords and punctuation around the numbers are ignored.
Instance parse_listing(const std::vector<Line_>& lines, std::string name) {
  static const std::regex integer(R"(-?\d+)");
  std::vector<std::pair<std::size_t, std::vector<Coord>>> rows;
  for (const auto& l : lines) {
    std::vector<Coord> v;
    for (auto it = std::sregex_iterator(l.text.begin(), l.text.end(), integer); it != std::sregex_iterator(); ++it)
      v.push_back(to_coord(it->str(), l.number));
    rows.emplace_back(l.number, std::move(v));
  }
  std::size_t i = 0;
  const auto count = [&](const char* what) {
    if (i >= rows.size() || rows[i].second.size() != 1 || rows[i].second[0] < 0)
      throw SyntaxError(i < rows.size() ? rows[i].first : 0, std::string("expected ") + what + " count");
    return std::size_t(rows[i++].second[0]);
  };
  Instance inst;
  inst.name = std::move(name);
  const std::size_t m = count("pin");
  for (std::size_t k = 0; k < m; ++k, ++i) {
    if (i >= rows.size() || rows[i].second.size() < 2) throw SyntaxError(i < rows.size() ? rows[i].first : 0, "expected pin coordinates");
    const auto& v = rows[i].second;
    inst.pins.push_back({v[v.size() - 2], v[v.size() - 1]});
  }
  const std::size_t n = count("obstacle");
  for (std::size_t k = 0; k < n; ++k, ++i) {
    if (i >= rows.size() || rows[i].second.size() < 4) throw SyntaxError(i < rows.size() ? rows[i].first : 0, "expected obstacle corners");
    const auto& v = rows[i].second;
    const std::size_t o = v.size() - 4;
    inst.obstacles.push_back(Rect::spanning({v[o], v[o + 1]}, {v[o + 2], v[o + 3]}));
  }
  if (i != rows.size()) throw SyntaxError(rows[i].first, "trailing content");
  if (inst.pins.empty()) throw SyntaxError(1, "no pins");
  Rect b{inst.pins.front(), inst.pins.front()};
  for (const Point& p : inst.pins) b = b.united(p);
  for (const Rect& r : inst.obstacles) b = b.united(r);
  inst.bounds = b;
  return inst;
}

}  // namespace

void validate(const Instance& inst) {
  if (!inst.bounds.valid()) throw ValidationError("bounds have lo > hi");
  const auto inside_bounds = [&](Point p) {
    return p.x >= inst.bounds.lo.x && p.x <= inst.bounds.hi.x && p.y >= inst.bounds.lo.y && p.y <= inst.bounds.hi.y;
  };
  std::unordered_set<Point> seen;
  for (std::size_t i = 0; i < inst.pins.size(); ++i) {
    if (!seen.insert(inst.pins[i]).second) throw ValidationError("pin " + std::to_string(i) + " is a duplicate");
    if (!inside_bounds(inst.pins[i])) throw ValidationError("pin " + std::to_string(i) + " lies outside the bounds");
  }
  for (std::size_t i = 0; i < inst.obstacles.size(); ++i) {
    const Rect& r = inst.obstacles[i];
    if (!r.has_area()) throw ValidationError("obstacle " + std::to_string(i) + " has no area");
    if (!inside_bounds(r.lo) || !inside_bounds(r.hi))
      throw ValidationError("obstacle " + std::to_string(i) + " lies outside the bounds");
  }
  RangeIndex idx;
  try {
    idx = RangeIndex::build(inst.obstacles);
  } catch (const OverlappingObstacles& e) {
    throw ValidationError(e.what());
  }
  for (std::size_t i = 0; i < inst.pins.size(); ++i)
    if (auto id = idx.containing(inst.pins[i]))
      throw ValidationError("pin " + std::to_string(i) + " lies inside obstacle " + std::to_string(*id));
}

Instance parse_bench(std::string_view text, std::string name) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw SyntaxError(1, "empty input");
  const auto first = split_ws(lines.front().text);
  Instance inst = first.front() == "bounds" ? parse_canonical(lines, std::move(name))
                                            : parse_listing(lines, std::move(name));
  // Map validation failures back to their source line where possible.
  try {
    validate(inst);
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    const auto locate = [&](const std::string& kind, std::size_t offset) -> std::optional<std::size_t> {
      static const std::regex re(R"((pin|obstacle) (\d+))");
      std::smatch mt;
      if (!std::regex_search(msg, mt, re) || mt[1] != kind) return std::nullopt;
      const std::size_t k = std::stoul(mt[2]) + offset;
      return k < lines.size() ? std::optional(lines[k].number) : std::nullopt;
    };
    const bool canonical = first.front() == "bounds";
    std::optional<std::size_t> line = locate("pin", canonical ? 2 : 1);
    if (!line) line = locate("obstacle", (canonical ? 3 : 2) + inst.pins.size());
    if (line) throw ValidationError("line " + std::to_string(*line) + ": " + msg);
    throw;
  }
  return inst;
}

std::string write_bench(const Instance& inst) {
  std::ostringstream out;
  out << "bounds " << inst.bounds.lo.x << ' ' << inst.bounds.lo.y << ' ' << inst.bounds.hi.x << ' '
      << inst.bounds.hi.y << '\n';
  out << "pins " << inst.pins.size() << '\n';
  for (const Point& p : inst.pins) out << p.x << ' ' << p.y << '\n';
  out << "obstacles " << inst.obstacles.size() << '\n';
  for (const Rect& r : inst.obstacles) out << r.lo.x << ' ' << r.lo.y << ' ' << r.hi.x << ' ' << r.hi.y << '\n';
  return out.str();
}

Instance read_bench_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bench(buf.str(), path.stem().string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_bench_file(const std::filesystem::path& path, const Instance& inst) {
  write_text_file(path, write_bench(inst));
}

nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j;
  j["name"] = inst.name;
  j["bounds"] = {inst.bounds.lo.x, inst.bounds.lo.y, inst.bounds.hi.x, inst.bounds.hi.y};
  j["pins"] = nlohmann::json::array();
  for (const Point& p : inst.pins) j["pins"].push_back({p.x, p.y});
  j["obstacles"] = nlohmann::json::array();
  for (const Rect& r : inst.obstacles) j["obstacles"].push_back({r.lo.x, r.lo.y, r.hi.x, r.hi.y});
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  try {
    inst.name = j.value("name", std::string{});
    const auto& b = j.at("bounds");
    inst.bounds = {{b.at(0).get<Coord>(), b.at(1).get<Coord>()}, {b.at(2).get<Coord>(), b.at(3).get<Coord>()}};
    for (const auto& p : j.at("pins")) inst.pins.push_back({p.at(0).get<Coord>(), p.at(1).get<Coord>()});
    for (const auto& r : j.at("obstacles"))
      inst.obstacles.push_back({{r.at(0).get<Coord>(), r.at(1).get<Coord>()}, {r.at(2).get<Coord>(), r.at(3).get<Coord>()}});
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(0, std::string("bad instance JSON: ") + e.what());
  }
  validate(inst);
  return inst;
}

double coverage(const Instance& inst) {
  Length covered = 0;
  for (const Rect& r : inst.obstacles) covered += r.area();
  const Length total = inst.bounds.area();
  return total > 0 ? double(covered) / double(total) : 0.0;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::vector<Rect> kd_cells(const Rect& bounds, int count, Rng& rng) {
  // Max-heap on area; ties resolved by creation order for determinism.
  using Item = std::tuple<Length, std::int64_t, Rect>;
  auto cmp = [](const Item& a, const Item& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) > std::get<1>(b);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  std::int64_t serial = 0;
  heap.push({bounds.area(), serial++, bounds});
  while (int(heap.size()) < count) {
    const Rect c = std::get<2>(heap.top());
    heap.pop();
    const bool vertical_cut = c.width() >= c.height();
    const Coord span = vertical_cut ? c.width() : c.height();
    if (span < 2) throw Unsatisfiable("layout too small for the requested obstacle count");
    const Coord lo = std::max<Coord>(1, Coord(span * 0.35)), hi = std::max(lo, std::min<Coord>(span - 1, Coord(span * 0.65)));
    const Coord cut = Coord(rng.uniform(lo, hi));
    Rect a = c, b = c;
    if (vertical_cut) {
      a.hi.x = c.lo.x + cut;
      b.lo.x = c.lo.x + cut;
    } else {
      a.hi.y = c.lo.y + cut;
      b.lo.y = c.lo.y + cut;
    }
    heap.push({a.area(), serial++, a});
    heap.push({b.area(), serial++, b});
  }
  std::vector<std::pair<std::int64_t, Rect>> cells;
  while (!heap.empty()) {
    cells.emplace_back(std::get<1>(heap.top()), std::get<2>(heap.top()));
    heap.pop();
  }
  std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Rect> out;
  for (const auto& [s, r] : cells) out.push_back(r);
  return out;
}

}  // namespace

Instance gen_random(const GenSpec& spec) {
  if (spec.pin_count < 2) throw Unsatisfiable("need at least 2 pins");
  if (spec.obstacle_count < 0) throw Unsatisfiable("negative obstacle count");
  if (!spec.bounds.has_area()) throw Unsatisfiable("bounds have no area");
  if (spec.obstacle_count > 0 && !(spec.density > 0.0 && spec.density < 1.0))
    throw Unsatisfiable("density must lie in (0, 1) when obstacles are requested");
  if (spec.obstacle_count == 0 && spec.density > 0.02)
    throw Unsatisfiable("density cannot be reached without obstacles");

  Instance inst;
  inst.name = "rand_p" + std::to_string(spec.pin_count) + "_o" + std::to_string(spec.obstacle_count) + "_d" +
              std::to_string(int(std::lround(spec.density * 100))) + "_s" + std::to_string(spec.seed);
  inst.bounds = spec.bounds;

  if (spec.obstacle_count > 0) {
    Rng cell_rng(derive_seed(spec.seed, 1));
    Rng place_rng(derive_seed(spec.seed, 2));
    const std::vector<Rect> cells = kd_cells(spec.bounds, spec.obstacle_count, cell_rng);
    double carry = 0.0;
    for (const Rect& cell : cells) {
      // One unit of clearance to the cell border keeps obstacles apart.
      const Rect inner{{cell.lo.x + 1, cell.lo.y + 1}, {cell.hi.x - 1, cell.hi.y - 1}};
      if (!inner.has_area()) throw Unsatisfiable("cells too small for the requested obstacle count");
      const double target = std::max(1.0, spec.density * double(cell.area()) + carry);
      const double aspect = std::exp((place_rng.unit() * 2.0 - 1.0) * std::log(2.0));
      Coord w = std::clamp<Coord>(Coord(std::lround(std::sqrt(target * aspect))), 1, inner.width());
      Coord h = std::clamp<Coord>(Coord(std::lround(target / w)), 1, inner.height());
      w = std::clamp<Coord>(Coord(std::lround(target / h)), 1, inner.width());
      carry = target - double(Length{w} * h);
      const Coord x = Coord(place_rng.uniform(inner.lo.x, inner.hi.x - w));
      const Coord y = Coord(place_rng.uniform(inner.lo.y, inner.hi.y - h));
      inst.obstacles.push_back({{x, y}, {x + w, y + h}});
    }
    if (std::abs(coverage(inst) - spec.density) > 0.02)
      throw Unsatisfiable("achieved density " + std::to_string(coverage(inst)) + " misses the target");
  }

  const RangeIndex idx = RangeIndex::build(inst.obstacles);
  Rng pin_rng(derive_seed(spec.seed, 3));
  std::unordered_set<Point> used;
  for (std::int64_t tries = 0; int(inst.pins.size()) < spec.pin_count; ++tries) {
    if (tries > 1'000'000) throw Unsatisfiable("could not place pins in free space");
    const Point p{Coord(pin_rng.uniform(spec.bounds.lo.x, spec.bounds.hi.x)),
                  Coord(pin_rng.uniform(spec.bounds.lo.y, spec.bounds.hi.y))};
    if (idx.containing(p) || !used.insert(p).second) continue;
    inst.pins.push_back(p);
  }
  return inst;
}

Instance gen_small(std::uint64_t seed, int max_pins, int max_obstacles, Coord size) {
  Rng rng(derive_seed(seed, 17));
  Instance inst;
  inst.name = "small_s" + std::to_string(seed);
  inst.bounds = {{0, 0}, {size, size}};
  const int n = int(rng.uniform(0, max_obstacles));
  for (int tries = 0; int(inst.obstacles.size()) < n && tries < 1000; ++tries) {
    const Coord w = Coord(rng.uniform(1, std::max<Coord>(1, size / 3)));
    const Coord h = Coord(rng.uniform(1, std::max<Coord>(1, size / 3)));
    if (w > size - 2 || h > size - 2) continue;
    const Coord x = Coord(rng.uniform(1, size - 1 - w));
    const Coord y = Coord(rng.uniform(1, size - 1 - h));
    const Rect r{{x, y}, {x + w, y + h}};
    // Keep a unit gap to other obstacles and to the frame.
    const Rect grown{{r.lo.x - 1, r.lo.y - 1}, {r.hi.x + 1, r.hi.y + 1}};
    bool ok = true;
    for (const Rect& o : inst.obstacles) ok = ok && !touches_interior(grown, o);
    if (ok) inst.obstacles.push_back(r);
  }
  const int m = int(rng.uniform(2, max_pins));
  std::unordered_set<Point> used;
  while (int(inst.pins.size()) < m) {
    const Point p{Coord(rng.uniform(0, size)), Coord(rng.uniform(0, size))};
    bool inside = false;
    for (const Rect& r : inst.obstacles) inside = inside || strictly_inside(p, r);
    if (inside || !used.insert(p).second) continue;
    inst.pins.push_back(p);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// SVG

std::string render_svg(const Instance& inst, std::span<const SvgLayer> layers) {
  const Rect b = inst.bounds;
  const double span = std::max<double>({1.0, double(b.width()), double(b.height())});
  const double margin = span * 0.03;
  const double scale = 800.0 / (span + 2 * margin);
  const auto X = [&](double x) { return (x - b.lo.x + margin) * scale; };
  const auto Y = [&](double y) { return (b.hi.y - y + margin) * scale; };
  const double W = (b.width() + 2 * margin) * scale, H = (b.height() + 2 * margin) * scale;

  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  o << "<rect x=\"" << X(b.lo.x) << "\" y=\"" << Y(b.hi.y) << "\" width=\"" << b.width() * scale << "\" height=\""
    << b.height() * scale << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  o << "<g id=\"obstacles\" fill=\"#b0b0b0\" stroke=\"#606060\" stroke-width=\"0.5\">\n";
  for (const Rect& r : inst.obstacles)
    o << "<rect x=\"" << X(r.lo.x) << "\" y=\"" << Y(r.hi.y) << "\" width=\"" << r.width() * scale
      << "\" height=\"" << r.height() * scale << "\"/>\n";
  o << "</g>\n";
  for (std::size_t l = 0; l < layers.size(); ++l) {
    o << "<g id=\"layer" << l << "\" stroke=\"" << layers[l].color << "\" stroke-width=\"" << layers[l].width
      << "\" stroke-linecap=\"square\" fill=\"none\">\n";
    for (const Segment& s : layers[l].segments)
      o << "<line x1=\"" << X(s.a.x) << "\" y1=\"" << Y(s.a.y) << "\" x2=\"" << X(s.b.x) << "\" y2=\"" << Y(s.b.y)
        << "\"/>\n";
    o << "</g>\n";
  }
  o << "<g id=\"pins\" fill=\"#d01010\">\n";
  const double radius = std::max(2.0, scale * 0.3);
  for (const Point& p : inst.pins) o << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"" << radius << "\"/>\n";
  o << "</g>\n</svg>\n";
  return o.str();
}

std::string render_svg(const Instance& inst, const RectTree& tree) {
  const SvgLayer layer{"#1060d0", tree.segments(), 2.0};
  return render_svg(inst, std::span<const SvgLayer>(&layer, 1));
}

}  // namespace oar
