#include <cstdlib>
#include <cstring>

#include "oar/kernels.hpp"

namespace oar::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("OAR_FORCE_SCALAR"); env && std::strcmp(env, "0") != 0)
    return Isa::Scalar;
  return avx2::available() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Scalar: break;
  }
  return "scalar";
}

void interior_contacts(const Rect& box, const RectSoA& rects, std::vector<std::uint32_t>& out) {
  if (active_isa() == Isa::Avx2)
    avx2::interior_contacts(box, rects, out);
  else
    scalar::interior_contacts(box, rects, out);
}

OverflowTotals overflow_totals(std::span<const std::int32_t> demand,
                               std::span<const std::int32_t> capacity,
                               std::span<const std::uint8_t> blocked) {
  return active_isa() == Isa::Avx2 ? avx2::overflow_totals(demand, capacity, blocked)
                           : scalar::overflow_totals(demand, capacity, blocked);
}

}  // namespace oar::kernels
