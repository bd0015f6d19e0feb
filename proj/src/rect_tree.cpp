#include "oar/rect_tree.hpp"

#include <algorithm>
#include <map>

namespace oar {

const char* role_name(NodeRole r) {
  switch (r) {
    case NodeRole::Pin: return "pin";
    case NodeRole::Steiner: return "steiner";
    case NodeRole::Corner: break;
  }
  return "corner";
}

std::vector<Segment> RectTree::segments() const {
  std::vector<Segment> out;
  out.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out.push_back(segment(e));
  return out;
}

Length RectTree::wirelength() const {
  Length total = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) total += segment(e).length();
  return total;
}

std::vector<std::uint32_t> RectTree::degrees() const {
  std::vector<std::uint32_t> deg(points.size(), 0);
  for (const Edge& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Length union_length(std::span<const Segment> segs) {
  // key: (orientation, fixed coordinate) -> intervals along the other axis
  std::map<std::pair<int, Coord>, std::vector<std::pair<Coord, Coord>>> lines;
  for (const Segment& s : segs) {
    if (s.degenerate()) continue;
    if (s.horizontal())
      lines[{0, s.a.y}].emplace_back(std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x));
    else
      lines[{1, s.a.x}].emplace_back(std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y));
  }
  Length total = 0;
  for (auto& [key, iv] : lines) {
    std::sort(iv.begin(), iv.end());
    Coord lo = iv.front().first, hi = iv.front().second;
    for (const auto& [a, b] : iv) {
      if (a > hi) {
        total += Length{hi} - lo;
        lo = a;
        hi = b;
      } else {
        hi = std::max(hi, b);
      }
    }
    total += Length{hi} - lo;
  }
  return total;
}

}  // namespace oar
