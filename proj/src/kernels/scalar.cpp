#include <algorithm>
#include <cassert>

#include "oar/kernels.hpp"

namespace oar::kernels::scalar {

void interior_contacts(const Rect& box, const RectSoA& rects, std::vector<std::uint32_t>& out) {
  const std::size_t n = rects.size();
  const Coord* lx = rects.lo_x();
  const Coord* ly = rects.lo_y();
  const Coord* hx = rects.hi_x();
  const Coord* hy = rects.hi_y();
  for (std::size_t i = 0; i < n; ++i) {
    if (lx[i] < box.hi.x && box.lo.x < hx[i] && ly[i] < box.hi.y && box.lo.y < hy[i])
      out.push_back(static_cast<std::uint32_t>(i));
  }
}

OverflowTotals overflow_totals(std::span<const std::int32_t> demand,
                               std::span<const std::int32_t> capacity,
                               std::span<const std::uint8_t> blocked) {
  assert(demand.size() == capacity.size() && demand.size() == blocked.size());
  OverflowTotals t;
  for (std::size_t i = 0; i < demand.size(); ++i) {
    if (blocked[i])
      t.violation += demand[i];
    else
      t.overflow += std::max(0, demand[i] - capacity[i]);
  }
  return t;
}

}  // namespace oar::kernels::scalar
