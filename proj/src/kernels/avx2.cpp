#include <algorithm>
#include <cassert>
#include <cstring>

#include "oar/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define OAR_HAVE_X86 1
#else
#define OAR_HAVE_X86 0
#endif

namespace oar::kernels::avx2 {

#if OAR_HAVE_X86

bool available() { return __builtin_cpu_supports("avx2"); }

__attribute__((target("avx2"))) void interior_contacts(const Rect& box, const RectSoA& rects,
                                                       std::vector<std::uint32_t>& out) {
  const std::size_t n = rects.size();
  const Coord* lx = rects.lo_x();
  const Coord* ly = rects.lo_y();
  const Coord* hx = rects.hi_x();
  const Coord* hy = rects.hi_y();

  const __m256i bhx = _mm256_set1_epi32(box.hi.x);
  const __m256i blx = _mm256_set1_epi32(box.lo.x);
  const __m256i bhy = _mm256_set1_epi32(box.hi.y);
  const __m256i bly = _mm256_set1_epi32(box.lo.y);

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i vlx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lx + i));
    const __m256i vhx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hx + i));
    const __m256i vly = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ly + i));
    const __m256i vhy = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hy + i));
    __m256i m = _mm256_cmpgt_epi32(bhx, vlx);
    m = _mm256_and_si256(m, _mm256_cmpgt_epi32(vhx, blx));
    m = _mm256_and_si256(m, _mm256_cmpgt_epi32(bhy, vly));
    m = _mm256_and_si256(m, _mm256_cmpgt_epi32(vhy, bly));
    unsigned bits = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(m)));
    while (bits) {
      const unsigned lane = static_cast<unsigned>(__builtin_ctz(bits));
      out.push_back(static_cast<std::uint32_t>(i + lane));
      bits &= bits - 1;
    }
  }
  for (; i < n; ++i) {
    if (lx[i] < box.hi.x && box.lo.x < hx[i] && ly[i] < box.hi.y && box.lo.y < hy[i])
      out.push_back(static_cast<std::uint32_t>(i));
  }
}

__attribute__((target("avx2"))) OverflowTotals overflow_totals(
    std::span<const std::int32_t> demand, std::span<const std::int32_t> capacity,
    std::span<const std::uint8_t> blocked) {
  assert(demand.size() == capacity.size() && demand.size() == blocked.size());
  const std::size_t n = demand.size();
  const __m256i zero = _mm256_setzero_si256();
  __m256i ow = zero;  // 4 x int64
  __m256i ov = zero;

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(demand.data() + i));
    const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(capacity.data() + i));
    std::int64_t packed;
    std::memcpy(&packed, blocked.data() + i, sizeof(packed));
    const __m256i b = _mm256_cvtepu8_epi32(_mm_cvtsi64_si128(packed));
    const __m256i is_blocked = _mm256_cmpgt_epi32(b, zero);

    const __m256i over = _mm256_max_epi32(_mm256_sub_epi32(d, c), zero);
    const __m256i ow32 = _mm256_andnot_si256(is_blocked, over);
    const __m256i ov32 = _mm256_and_si256(is_blocked, d);

    ow = _mm256_add_epi64(ow, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(ow32)));
    ow = _mm256_add_epi64(ow, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(ow32, 1)));
    ov = _mm256_add_epi64(ov, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(ov32)));
    ov = _mm256_add_epi64(ov, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(ov32, 1)));
  }

  alignas(32) std::int64_t lanes_ow[4];
  alignas(32) std::int64_t lanes_ov[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes_ow), ow);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes_ov), ov);
  OverflowTotals t;
  for (int k = 0; k < 4; ++k) {
    t.overflow += lanes_ow[k];
    t.violation += lanes_ov[k];
  }
  for (; i < n; ++i) {
    if (blocked[i])
      t.violation += demand[i];
    else
      t.overflow += std::max(0, demand[i] - capacity[i]);
  }
  return t;
}

#else

bool available() { return false; }

void interior_contacts(const Rect& box, const RectSoA& rects, std::vector<std::uint32_t>& out) {
  scalar::interior_contacts(box, rects, out);
}

OverflowTotals overflow_totals(std::span<const std::int32_t> demand,
                               std::span<const std::int32_t> capacity,
                               std::span<const std::uint8_t> blocked) {
  return scalar::overflow_totals(demand, capacity, blocked);
}

#endif

}  // namespace oar::kernels::avx2
