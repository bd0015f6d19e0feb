#include "oar/obstacle_index.hpp"

#include <algorithm>
#include <cassert>

namespace oar {

Segment entry_side(const Rect& r, Dir dir) {
  switch (dir) {
    case Dir::Down: return {{r.lo.x, r.hi.y}, {r.hi.x, r.hi.y}};
    case Dir::Up: return {{r.lo.x, r.lo.y}, {r.hi.x, r.lo.y}};
    case Dir::Right: return {{r.lo.x, r.lo.y}, {r.lo.x, r.hi.y}};
    case Dir::Left: break;
  }
  return {{r.hi.x, r.lo.y}, {r.hi.x, r.hi.y}};
}

std::optional<Segment> ray_extent(const Ray& ray, Coord stop) {
  const Point o = ray.origin;
  switch (ray.dir) {
    case Dir::Right:
      if (stop < o.x) return std::nullopt;
      return Segment{o, {stop, o.y}};
    case Dir::Left:
      if (stop > o.x) return std::nullopt;
      return Segment{o, {stop, o.y}};
    case Dir::Up:
      if (stop < o.y) return std::nullopt;
      return Segment{o, {o.x, stop}};
    case Dir::Down: break;
  }
  if (stop > o.y) return std::nullopt;
  return Segment{o, {o.x, stop}};
}

// ---------------------------------------------------------------------------
// Axis

std::optional<std::size_t> RangeIndex::Axis::slot_of(Coord c) const {
  if (keys.empty() || c < keys.front() || c > keys.back()) return std::nullopt;
  const auto it = std::lower_bound(keys.begin(), keys.end(), c);
  const auto i = static_cast<std::size_t>(it - keys.begin());
  return *it == c ? 2 * i : 2 * i - 1;
}

std::optional<std::pair<std::size_t, std::size_t>> RangeIndex::Axis::slot_range(Coord lo,
                                                                                Coord hi) const {
  if (keys.empty() || hi < keys.front() || lo > keys.back()) return std::nullopt;
  const std::size_t k = keys.size();

  const auto i = static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), lo) -
                                          keys.begin());
  std::size_t s0;
  if (keys[i] == lo || i == 0)
    s0 = 2 * i;
  else
    s0 = 2 * i - 1;

  const auto j = static_cast<std::size_t>(std::upper_bound(keys.begin(), keys.end(), hi) -
                                          keys.begin()) - 1;
  std::size_t s1;
  if (keys[j] == hi || j == k - 1)
    s1 = 2 * j;
  else
    s1 = 2 * j + 1;

  if (s0 > s1) return std::nullopt;
  return std::pair{s0, s1};
}

std::span<const RangePair> RangeIndex::Axis::at(Coord c) const {
  const auto s = slot_of(c);
  if (!s) return {};
  return slot(*s);
}

RangeIndex::Axis RangeIndex::build_axis(std::span<const Rect> obstacles, bool rows) {
  // rows: key on y, store x-extents. cols: key on x, store y-extents.
  const auto key_lo = [rows](const Rect& r) { return rows ? r.lo.y : r.lo.x; };
  const auto key_hi = [rows](const Rect& r) { return rows ? r.hi.y : r.hi.x; };
  const auto ext_lo = [rows](const Rect& r) { return rows ? r.lo.x : r.lo.y; };
  const auto ext_hi = [rows](const Rect& r) { return rows ? r.hi.x : r.hi.y; };

  Axis axis;
  axis.keys.reserve(obstacles.size() * 2);
  for (const Rect& r : obstacles) {
    axis.keys.push_back(key_lo(r));
    axis.keys.push_back(key_hi(r));
  }
  std::sort(axis.keys.begin(), axis.keys.end());
  axis.keys.erase(std::unique(axis.keys.begin(), axis.keys.end()), axis.keys.end());

  const std::size_t slots = axis.slots();
  const auto index_of = [&axis](Coord c) {
    return static_cast<std::size_t>(std::lower_bound(axis.keys.begin(), axis.keys.end(), c) -
                                    axis.keys.begin());
  };

  // Obstacle with open key-extent (a, b) covers slots 2*ia+1 .. 2*ib-1.
  std::vector<std::uint32_t> counts(slots + 1, 0);
  for (const Rect& r : obstacles) {
    const std::size_t first = 2 * index_of(key_lo(r)) + 1;
    const std::size_t last = 2 * index_of(key_hi(r)) - 1;
    for (std::size_t s = first; s <= last; ++s) ++counts[s + 1];
  }
  axis.offsets.assign(slots + 1, 0);
  for (std::size_t s = 0; s < slots; ++s) axis.offsets[s + 1] = axis.offsets[s] + counts[s + 1];
  axis.pairs.resize(slots ? axis.offsets[slots] : 0);

  std::vector<std::uint32_t> fill(axis.offsets.begin(), axis.offsets.end());
  for (std::size_t id = 0; id < obstacles.size(); ++id) {
    const Rect& r = obstacles[id];
    const std::size_t first = 2 * index_of(key_lo(r)) + 1;
    const std::size_t last = 2 * index_of(key_hi(r)) - 1;
    for (std::size_t s = first; s <= last; ++s)
      axis.pairs[fill[s]++] = {ext_lo(r), ext_hi(r), static_cast<ObstacleId>(id)};
  }
  for (std::size_t s = 0; s < slots; ++s) {
    std::sort(axis.pairs.begin() + axis.offsets[s], axis.pairs.begin() + axis.offsets[s + 1],
              [](const RangePair& a, const RangePair& b) {
                return a.lo != b.lo ? a.lo < b.lo : a.id < b.id;
              });
  }
  if (axis.offsets.empty()) axis.offsets.push_back(0);
  return axis;
}

void RangeIndex::check_disjoint(const Axis& axis) {
  for (std::size_t s = 0; s < axis.slots(); ++s) {
    const auto list = axis.slot(s);
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i - 1].hi > list[i].lo) throw OverlappingObstacles(list[i - 1].id, list[i].id);
    }
  }
}

void RangeIndex::collect(std::span<const RangePair> list, Coord lo, Coord hi,
                         std::vector<ObstacleId>& out) {
  // Intervals are disjoint and sorted by lo, hence also sorted by hi.
  auto it = std::partition_point(list.begin(), list.end(),
                                 [lo](const RangePair& p) { return p.hi <= lo; });
  for (; it != list.end() && it->lo < hi; ++it) out.push_back(it->id);
}

// ---------------------------------------------------------------------------
// RangeIndex

RangeIndex RangeIndex::build(std::span<const Rect> obstacles, std::span<const Point> extra) {
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (!obstacles[i].has_area())
      throw std::invalid_argument("obstacle " + std::to_string(i) + " has no area");
  }
  RangeIndex idx;
  idx.obstacles_.assign(obstacles.begin(), obstacles.end());
  idx.rows_ = build_axis(obstacles, true);
  idx.cols_ = build_axis(obstacles, false);
  check_disjoint(idx.rows_);

  for (const Rect& r : obstacles) {
    idx.grid_xs_.insert(idx.grid_xs_.end(), {r.lo.x, r.hi.x, Coord((Length{r.lo.x} + r.hi.x) / 2)});
    idx.grid_ys_.insert(idx.grid_ys_.end(), {r.lo.y, r.hi.y, Coord((Length{r.lo.y} + r.hi.y) / 2)});
  }
  for (const Point& p : extra) {
    idx.grid_xs_.push_back(p.x);
    idx.grid_ys_.push_back(p.y);
  }
  for (auto* v : {&idx.grid_xs_, &idx.grid_ys_}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return idx;
}

std::vector<ObstacleId> RangeIndex::crossing_obstacles(const Segment& s) const {
  std::vector<ObstacleId> out;
  if (s.horizontal()) {
    collect(rows_.at(s.a.y), std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x), out);
    if (s.a.x > s.b.x) std::reverse(out.begin(), out.end());
  } else {
    assert(s.vertical());
    collect(cols_.at(s.a.x), std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y), out);
    if (s.a.y > s.b.y) std::reverse(out.begin(), out.end());
  }
  return out;
}

bool RangeIndex::crosses_any(const Segment& s) const {
  const bool h = s.horizontal();
  const auto list = h ? rows_.at(s.a.y) : cols_.at(s.a.x);
  const Coord lo = h ? std::min(s.a.x, s.b.x) : std::min(s.a.y, s.b.y);
  const Coord hi = h ? std::max(s.a.x, s.b.x) : std::max(s.a.y, s.b.y);
  const auto it = std::partition_point(list.begin(), list.end(),
                                       [lo](const RangePair& p) { return p.hi <= lo; });
  return it != list.end() && it->lo < hi;
}

std::optional<Blocking> RangeIndex::first_blocking(const Ray& ray, Coord stop) const {
  const auto seg = ray_extent(ray, stop);
  if (!seg) return std::nullopt;
  const auto hits = crossing_obstacles(*seg);
  if (hits.empty()) return std::nullopt;
  const ObstacleId id = hits.front();
  return Blocking{id, entry_side(obstacles_[id], ray.dir)};
}

std::vector<ObstacleId> RangeIndex::rect_overlaps(const Rect& b) const {
  std::vector<ObstacleId> out;
  // Sweep the lines orthogonal to the short side of the box.
  const bool sweep_rows = b.height() <= b.width();
  const Axis& axis = sweep_rows ? rows_ : cols_;
  const auto range = sweep_rows ? axis.slot_range(b.lo.y, b.hi.y) : axis.slot_range(b.lo.x, b.hi.x);
  if (!range) return out;
  const Coord lo = sweep_rows ? b.lo.x : b.lo.y;
  const Coord hi = sweep_rows ? b.hi.x : b.hi.y;
  for (std::size_t s = range->first; s <= range->second; ++s) collect(axis.slot(s), lo, hi, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<ObstacleId> RangeIndex::containing(Point p) const {
  std::vector<ObstacleId> out;
  collect(rows_.at(p.y), p.x, p.x, out);
  if (out.empty()) return std::nullopt;
  return out.front();
}

// ---------------------------------------------------------------------------
// ObstacleList

std::vector<ObstacleId> ObstacleList::crossing_obstacles(const Segment& s) const {
  std::vector<std::uint32_t> hits;
  kernels::interior_contacts(Rect::of(s), soa_, hits);
  // Order along the segment by entry coordinate.
  const bool h = s.horizontal();
  const bool forward = h ? s.a.x <= s.b.x : s.a.y <= s.b.y;
  std::sort(hits.begin(), hits.end(), [&](std::uint32_t i, std::uint32_t j) {
    const Rect& a = rects_[i];
    const Rect& b = rects_[j];
    const Coord ka = h ? (forward ? a.lo.x : -a.hi.x) : (forward ? a.lo.y : -a.hi.y);
    const Coord kb = h ? (forward ? b.lo.x : -b.hi.x) : (forward ? b.lo.y : -b.hi.y);
    return ka != kb ? ka < kb : i < j;
  });
  return {hits.begin(), hits.end()};
}

std::optional<Blocking> ObstacleList::first_blocking(const Ray& ray, Coord stop) const {
  const auto seg = ray_extent(ray, stop);
  if (!seg) return std::nullopt;
  std::vector<std::uint32_t> hits;
  kernels::interior_contacts(Rect::of(*seg), soa_, hits);
  if (hits.empty()) return std::nullopt;
  const auto entry = [&](std::uint32_t i) -> Coord {
    const Rect& r = rects_[i];
    switch (ray.dir) {
      case Dir::Right: return r.lo.x;
      case Dir::Left: return -r.hi.x;
      case Dir::Up: return r.lo.y;
      case Dir::Down: break;
    }
    return -r.hi.y;
  };
  const auto best = *std::min_element(hits.begin(), hits.end(), [&](std::uint32_t i, std::uint32_t j) {
    const Coord ei = entry(i), ej = entry(j);
    return ei != ej ? ei < ej : i < j;
  });
  return Blocking{best, entry_side(rects_[best], ray.dir)};
}

std::optional<ObstacleId> ObstacleList::containing(Point p) const {
  std::vector<std::uint32_t> hits;
  kernels::interior_contacts(Rect{p, p}, soa_, hits);
  if (hits.empty()) return std::nullopt;
  return hits.front();
}

}  // namespace oar
