#include <gtest/gtest.h>

#include "oar/kernels.hpp"
#include "oar/rng.hpp"
#include "random_layout.hpp"

namespace oar::kernels {
namespace {

TEST(Kernels, ReportsIsa) {
  const Isa isa = active_isa();
  EXPECT_TRUE(isa == Isa::Scalar || isa == Isa::Avx2);
  if (!avx2::available()) EXPECT_EQ(isa, Isa::Scalar);
}

TEST(InteriorContacts, ScalarMatchesDefinition) {
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    std::vector<Rect> rects;
    for (int i = 0; i < 37; ++i) rects.push_back(testing::random_box(rng, -50, 50));
    const RectSoA soa(rects);
    const Rect box = testing::random_box(rng, -50, 50);
    std::vector<std::uint32_t> got;
    scalar::interior_contacts(box, soa, got);
    std::vector<std::uint32_t> want;
    for (std::uint32_t i = 0; i < rects.size(); ++i)
      if (touches_interior(box, rects[i])) want.push_back(i);
    EXPECT_EQ(got, want);
  }
}

TEST(InteriorContacts, Avx2MatchesScalar) {
  if (!avx2::available()) GTEST_SKIP() << "no AVX2 on this CPU";
  Rng rng(2);
  for (int k = 0; k < 2000; ++k) {
    const int n = int(rng.uniform(0, 70));
    std::vector<Rect> rects;
    for (int i = 0; i < n; ++i) rects.push_back(testing::random_box(rng, -40, 40));
    const RectSoA soa(rects);
    const Rect box = testing::random_box(rng, -40, 40);
    std::vector<std::uint32_t> a, b;
    scalar::interior_contacts(box, soa, a);
    avx2::interior_contacts(box, soa, b);
    ASSERT_EQ(a, b) << "n=" << n << " box=" << box;
  }
}

TEST(InteriorContacts, ExtremeCoordinates) {
  if (!avx2::available()) GTEST_SKIP() << "no AVX2 on this CPU";
  const Coord big = std::numeric_limits<Coord>::max();
  const Coord small = std::numeric_limits<Coord>::min();
  std::vector<Rect> rects(9, Rect{{small, small}, {big, big}});
  rects[3] = {{0, 0}, {1, 1}};
  const RectSoA soa(rects);
  for (const Rect box : {Rect{{0, 0}, {0, 0}}, Rect{{small, small}, {big, big}}, Rect{{big, big}, {big, big}}}) {
    std::vector<std::uint32_t> a, b;
    scalar::interior_contacts(box, soa, a);
    avx2::interior_contacts(box, soa, b);
    EXPECT_EQ(a, b);
  }
}

TEST(OverflowTotals, HandCount) {
  const std::vector<std::int32_t> d{3, 1, 0, 5, 2};
  const std::vector<std::int32_t> c{2, 2, 0, 0, 2};
  const std::vector<std::uint8_t> b{0, 0, 0, 1, 0};
  const OverflowTotals t = scalar::overflow_totals(d, c, b);
  EXPECT_EQ(t.overflow, 1);
  EXPECT_EQ(t.violation, 5);
}

TEST(OverflowTotals, Avx2MatchesScalar) {
  if (!avx2::available()) GTEST_SKIP() << "no AVX2 on this CPU";
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = std::size_t(rng.uniform(0, 300));
    std::vector<std::int32_t> d(n), c(n);
    std::vector<std::uint8_t> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = std::int32_t(rng.uniform(0, 1000000));
      c[i] = std::int32_t(rng.uniform(0, 1000000));
      b[i] = std::uint8_t(rng.uniform(0, 3) == 0 ? rng.uniform(1, 255) : 0);
    }
    ASSERT_EQ(scalar::overflow_totals(d, c, b), avx2::overflow_totals(d, c, b)) << "n=" << n;
  }
}

TEST(OverflowTotals, DispatchMatchesScalar) {
  const std::vector<std::int32_t> d(1000, 7);
  const std::vector<std::int32_t> c(1000, 3);
  std::vector<std::uint8_t> b(1000, 0);
  for (std::size_t i = 0; i < b.size(); i += 3) b[i] = 1;
  EXPECT_EQ(overflow_totals(d, c, b), scalar::overflow_totals(d, c, b));
}

}  // namespace
}  // namespace oar::kernels
