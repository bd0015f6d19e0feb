#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// kernels::scalar and a vector variant; the dispatching entry points pick the
// widest variant the running CPU supports. Set OAR_FORCE_SCALAR=1 in the
// environment to pin the scalar path.

#include <cstdint>
#include <span>
#include <vector>

#include "oar/geometry.hpp"

namespace oar::kernels {

/// Rectangles in structure-of-arrays layout, padded-free; lanes are loaded
/// unaligned.
class RectSoA {
 public:
  RectSoA() = default;
  explicit RectSoA(std::span<const Rect> rects) {
    reserve(rects.size());
    for (const Rect& r : rects) push_back(r);
  }

  void reserve(std::size_t n) {
    lo_x_.reserve(n);
    lo_y_.reserve(n);
    hi_x_.reserve(n);
    hi_y_.reserve(n);
  }
  void push_back(const Rect& r) {
    lo_x_.push_back(r.lo.x);
    lo_y_.push_back(r.lo.y);
    hi_x_.push_back(r.hi.x);
    hi_y_.push_back(r.hi.y);
  }
  void clear() {
    lo_x_.clear();
    lo_y_.clear();
    hi_x_.clear();
    hi_y_.clear();
  }

  std::size_t size() const { return lo_x_.size(); }
  bool empty() const { return lo_x_.empty(); }
  Rect at(std::size_t i) const { return {{lo_x_[i], lo_y_[i]}, {hi_x_[i], hi_y_[i]}}; }

  const Coord* lo_x() const { return lo_x_.data(); }
  const Coord* lo_y() const { return lo_y_.data(); }
  const Coord* hi_x() const { return hi_x_.data(); }
  const Coord* hi_y() const { return hi_y_.data(); }

 private:
  std::vector<Coord> lo_x_, lo_y_, hi_x_, hi_y_;
};

struct OverflowTotals {
  std::int64_t overflow = 0;   // sum of max(0, demand - capacity) over unblocked edges
  std::int64_t violation = 0;  // sum of demand over blocked edges

  friend bool operator==(const OverflowTotals&, const OverflowTotals&) = default;
};

enum class Isa : std::uint8_t { Scalar, Avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

/// Appends, in increasing index order, every i with touches_interior(box, rects[i]).
void interior_contacts(const Rect& box, const RectSoA& rects, std::vector<std::uint32_t>& out);

OverflowTotals overflow_totals(std::span<const std::int32_t> demand,
                               std::span<const std::int32_t> capacity,
                               std::span<const std::uint8_t> blocked);

namespace scalar {
void interior_contacts(const Rect& box, const RectSoA& rects, std::vector<std::uint32_t>& out);
OverflowTotals overflow_totals(std::span<const std::int32_t> demand,
                               std::span<const std::int32_t> capacity,
                               std::span<const std::uint8_t> blocked);
}  // namespace scalar

namespace avx2 {
/// False on non-x86 builds or CPUs without AVX2; the functions below must not
/// be called then.
bool available();
void interior_contacts(const Rect& box, const RectSoA& rects, std::vector<std::uint32_t>& out);
OverflowTotals overflow_totals(std::span<const std::int32_t> demand,
                               std::span<const std::int32_t> capacity,
                               std::span<const std::uint8_t> blocked);
}  // namespace avx2

}  // namespace oar::kernels
