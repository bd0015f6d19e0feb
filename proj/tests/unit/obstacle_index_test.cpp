#include <gtest/gtest.h>

#include <algorithm>

#include "oar/obstacle_index.hpp"
#include "oar/rng.hpp"
#include "random_layout.hpp"

namespace oar {
namespace {

// Layout in the style of the range-list illustration: b0 and b1 span rows 1
// and 2, b2 only row 2, b3 is small and sits inside the box B below.
std::vector<Rect> figure_layout() {
  return {
      {{0, 0}, {3, 3}},    // b0
      {{4, 0}, {5, 3}},    // b1
      {{7, 1}, {8, 3}},    // b2
      {{10, 5}, {12, 7}},  // b3
  };
}

std::vector<std::pair<Coord, Coord>> extents(std::span<const RangePair> list) {
  std::vector<std::pair<Coord, Coord>> out;
  for (const RangePair& p : list) out.emplace_back(p.lo, p.hi);
  return out;
}

TEST(RangeIndex, RowListMatchesIllustration) {
  const auto idx = RangeIndex::build(figure_layout());
  const std::vector<RangePair> want{{0, 3, 0}, {4, 5, 1}};
  EXPECT_EQ(std::vector<RangePair>(idx.row(1).begin(), idx.row(1).end()), want);
  EXPECT_EQ(extents(idx.row(2)), (std::vector<std::pair<Coord, Coord>>{{0, 3}, {4, 5}, {7, 8}}));
}

TEST(RangeIndex, SegmentCrossesTwoObstacles) {
  const auto idx = RangeIndex::build(figure_layout());
  EXPECT_EQ(idx.crossing_obstacles({{1, 2}, {6, 2}}), (std::vector<ObstacleId>{0, 1}));
  EXPECT_EQ(idx.crossing_obstacles({{6, 2}, {1, 2}}), (std::vector<ObstacleId>{1, 0}));
}

TEST(RangeIndex, BoundarySegmentCrossesNothing) {
  const auto idx = RangeIndex::build(figure_layout());
  EXPECT_TRUE(idx.crossing_obstacles({{-5, 3}, {20, 3}}).empty());
  EXPECT_TRUE(idx.crossing_obstacles({{3, -5}, {3, 9}}).empty());
  EXPECT_FALSE(idx.crosses_any({{3, -5}, {3, 9}}));
}

TEST(RangeIndex, BoxFindsObstacleStrictlyInside) {
  const auto idx = RangeIndex::build(figure_layout());
  // Long horizontal box whose boundary rows miss b3 entirely.
  EXPECT_EQ(idx.rect_overlaps({{9, 4}, {30, 8}}), (std::vector<ObstacleId>{3}));
  EXPECT_TRUE(idx.rect_overlaps({{20, 20}, {30, 30}}).empty());
}

TEST(RangeIndex, EmptyBuild) {
  const auto idx = RangeIndex::build({});
  EXPECT_TRUE(idx.empty());
  EXPECT_TRUE(idx.row(0).empty());
  EXPECT_TRUE(idx.crossing_obstacles({{0, 0}, {5, 0}}).empty());
  EXPECT_TRUE(idx.rect_overlaps({{0, 0}, {5, 5}}).empty());
  EXPECT_FALSE(idx.first_blocking({{0, 0}, Dir::Right}, 9).has_value());
}

TEST(RangeIndex, SingleObstacleColumns) {
  const std::vector<Rect> obs{{{2, 2}, {4, 6}}};
  const auto idx = RangeIndex::build(obs);
  EXPECT_EQ(extents(idx.col(3)), (std::vector<std::pair<Coord, Coord>>{{2, 6}}));
  EXPECT_TRUE(idx.col(2).empty());
  EXPECT_TRUE(idx.col(4).empty());
  EXPECT_EQ(extents(idx.row(4)), (std::vector<std::pair<Coord, Coord>>{{2, 4}}));
  EXPECT_TRUE(idx.row(6).empty());
  EXPECT_TRUE(std::binary_search(idx.grid_xs().begin(), idx.grid_xs().end(), 3));
  EXPECT_TRUE(std::binary_search(idx.grid_ys().begin(), idx.grid_ys().end(), 4));
}

TEST(RangeIndex, FirstBlockingReturnsEntrySide) {
  const std::vector<Rect> obs{{{-2, 2}, {1, 3}}};
  const auto idx = RangeIndex::build(obs);
  const auto hit = idx.first_blocking({{0, 5}, Dir::Down}, 0);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->id, 0u);
  EXPECT_EQ(hit->boundary, (Segment{{-2, 3}, {1, 3}}));
}

TEST(RangeIndex, GrazingRayDoesNotBlock) {
  const std::vector<Rect> obs{{{-2, 2}, {1, 3}}};
  const auto idx = RangeIndex::build(obs);
  EXPECT_FALSE(idx.first_blocking({{1, 5}, Dir::Down}, 0).has_value());
  EXPECT_FALSE(idx.first_blocking({{-5, 3}, Dir::Right}, 9).has_value());
  EXPECT_FALSE(idx.first_blocking({{0, 5}, Dir::Down}, 3).has_value());
}

TEST(RangeIndex, NearestBlockerWins) {
  const std::vector<Rect> obs{{{5, 0}, {6, 4}}, {{2, 1}, {3, 4}}};
  const auto idx = RangeIndex::build(obs);
  EXPECT_EQ(idx.first_blocking({{0, 2}, Dir::Right}, 10)->id, 1u);
  EXPECT_EQ(idx.first_blocking({{10, 2}, Dir::Left}, 0)->id, 0u);
  EXPECT_EQ(idx.first_blocking({{10, 2}, Dir::Left}, 0)->boundary, (Segment{{6, 0}, {6, 4}}));
}

TEST(RangeIndex, RejectsOverlap) {
  const std::vector<Rect> obs{{{0, 0}, {4, 4}}, {{3, 3}, {6, 6}}};
  EXPECT_THROW(RangeIndex::build(obs), OverlappingObstacles);
  const std::vector<Rect> nested{{{0, 0}, {10, 10}}, {{3, 3}, {4, 4}}};
  EXPECT_THROW(RangeIndex::build(nested), OverlappingObstacles);
}

TEST(RangeIndex, AcceptsTouching) {
  const std::vector<Rect> obs{{{0, 0}, {4, 4}}, {{4, 0}, {6, 4}}, {{0, 4}, {4, 8}}};
  EXPECT_NO_THROW(RangeIndex::build(obs));
}

TEST(RangeIndex, RejectsZeroArea) {
  const std::vector<Rect> obs{{{0, 0}, {0, 4}}};
  EXPECT_THROW(RangeIndex::build(obs), std::invalid_argument);
}

TEST(RangeIndex, ContainingIsStrict) {
  const auto idx = RangeIndex::build(figure_layout());
  EXPECT_EQ(idx.containing({1, 1}), ObstacleId{0});
  EXPECT_FALSE(idx.containing({3, 1}).has_value());
  EXPECT_FALSE(idx.containing({0, 0}).has_value());
}

TEST(RangeIndexProperty, BuildIsPure) {
  Rng rng(5);
  const auto obs = testing::random_obstacles(rng, 60, 100, 12);
  EXPECT_EQ(RangeIndex::build(obs), RangeIndex::build(obs));
}

std::vector<ObstacleId> naive_crossing(std::span<const Rect> obs, const Segment& s) {
  std::vector<ObstacleId> out;
  for (ObstacleId i = 0; i < obs.size(); ++i)
    if (seg_vs_rect(s, obs[i]) == SegRect::CrossesInterior) out.push_back(i);
  return out;
}

TEST(RangeIndexProperty, QueriesMatchNaiveScan) {
  Rng rng(6);
  for (int layout = 0; layout < 40; ++layout) {
    const auto obs = testing::random_obstacles(rng, int(rng.uniform(1, 80)), 60, 15);
    const auto idx = RangeIndex::build(obs);
    const ObstacleList list{obs};
    for (int q = 0; q < 250; ++q) {
      const Segment s = testing::random_segment(rng, -5, 70);
      auto got = idx.crossing_obstacles(s);
      auto via_list = list.crossing_obstacles(s);
      EXPECT_EQ(got, via_list);
      std::sort(got.begin(), got.end());
      ASSERT_EQ(got, naive_crossing(obs, s)) << s;

      const Rect b = testing::random_box(rng, -5, 70);
      std::vector<ObstacleId> want;
      for (ObstacleId i = 0; i < obs.size(); ++i)
        if (touches_interior(b, obs[i])) want.push_back(i);
      ASSERT_EQ(idx.rect_overlaps(b), want) << b;

      const Point p = testing::random_point(rng, -5, 70);
      std::optional<ObstacleId> inside;
      for (ObstacleId i = 0; i < obs.size(); ++i)
        if (strictly_inside(p, obs[i])) inside = i;
      ASSERT_EQ(idx.containing(p), inside);
      ASSERT_EQ(list.containing(p), inside);

      const Ray ray{p, Dir(rng.uniform(0, 3))};
      const Coord stop = Coord(rng.uniform(-5, 70));
      EXPECT_EQ(idx.first_blocking(ray, stop), list.first_blocking(ray, stop));
    }
  }
}

TEST(RangeIndexProperty, CrossingOrderFollowsSegment) {
  Rng rng(8);
  for (int layout = 0; layout < 20; ++layout) {
    const auto obs = testing::random_obstacles(rng, 60, 60, 10);
    const auto idx = RangeIndex::build(obs);
    for (int q = 0; q < 200; ++q) {
      const Segment s = testing::random_segment(rng, 0, 60);
      const auto ids = idx.crossing_obstacles(s);
      const int sign = (s.b.x - s.a.x) + (s.b.y - s.a.y) >= 0 ? 1 : -1;
      for (std::size_t i = 1; i < ids.size(); ++i) {
        const Rect& prev = obs[ids[i - 1]];
        const Rect& cur = obs[ids[i]];
        const Coord a = s.horizontal() ? prev.lo.x : prev.lo.y;
        const Coord b = s.horizontal() ? cur.lo.x : cur.lo.y;
        EXPECT_LT(sign * a, sign * b);
      }
    }
  }
}

}  // namespace
}  // namespace oar
