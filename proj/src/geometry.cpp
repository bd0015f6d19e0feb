#include "oar/geometry.hpp"

#include <cassert>
#include <cmath>

namespace oar {

double dist_point_line(Point c, const Line& l) {
  assert(l.p != l.q);
  const double dx = double(l.q.x) - l.p.x;
  const double dy = double(l.q.y) - l.p.y;
  const double cross = dx * (double(c.y) - l.p.y) - dy * (double(c.x) - l.p.x);
  return std::abs(cross) / std::hypot(dx, dy);
}

}  // namespace oar
