#include "cityind/seg_index.hpp"

#include <algorithm>
#include <cmath>

#include "cityind/util.hpp"

namespace cityind {

namespace {
std::uint64_t pack(std::int64_t cx, std::int64_t cy) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
}
}  // namespace

void SegmentIndex::add(int object_id, int seg_index, const Point& a, const Point& b) {
  segs_.push_back({a, b, object_id, seg_index});
  built_ = false;
}

std::int64_t SegmentIndex::cell_of(double v) const {
  return static_cast<std::int64_t>(std::floor(v / cell_));
}

void SegmentIndex::build(double cell_size) {
  cells_.clear();
  if (segs_.empty()) {
    built_ = true;
    cell_ = 1.0;
    return;
  }
  if (cell_size <= 0.0) {
    double total = 0.0;
    for (const Seg& s : segs_) total += dist(s.a, s.b);
    cell_size = std::max(1.0, total / static_cast<double>(segs_.size()));
  }
  cell_ = cell_size;
  for (size_t i = 0; i < segs_.size(); ++i) {
    const Seg& s = segs_[i];
    std::int64_t x0 = cell_of(std::min(s.a.x, s.b.x));
    std::int64_t x1 = cell_of(std::max(s.a.x, s.b.x));
    std::int64_t y0 = cell_of(std::min(s.a.y, s.b.y));
    std::int64_t y1 = cell_of(std::max(s.a.y, s.b.y));
    for (std::int64_t cx = x0; cx <= x1; ++cx)
      for (std::int64_t cy = y0; cy <= y1; ++cy)
        cells_[pack(cx, cy)].push_back(static_cast<int>(i));
  }
  built_ = true;
}

const std::vector<int>* SegmentIndex::bucket(std::int64_t cx, std::int64_t cy) const {
  auto it = cells_.find(pack(cx, cy));
  return it == cells_.end() ? nullptr : &it->second;
}

std::optional<SegmentIndex::Hit> SegmentIndex::nearest(const Point& p, double max_dist) const {
  if (!built_) throw InternalError("SegmentIndex::nearest before build()");
  if (segs_.empty()) return std::nullopt;

  std::int64_t pcx = cell_of(p.x), pcy = cell_of(p.y);
  std::optional<Hit> best;

  auto consider = [&](int idx) {
    const Seg& s = segs_[idx];
    double t = 0.0;
    double d = point_segment_dist(p, s.a, s.b, &t);
    if (d > max_dist) return;
    bool better = false;
    if (!best || d < best->distance) {
      better = true;
    } else if (d == best->distance) {
      if (s.object_id < best->object_id ||
          (s.object_id == best->object_id && s.seg_index < best->seg_index))
        better = true;
    }
    if (better) {
      Hit h;
      h.object_id = s.object_id;
      h.seg_index = s.seg_index;
      h.t = t;
      h.distance = d;
      h.closest = s.a + (s.b - s.a) * t;
      best = h;
    }
  };

  std::int64_t max_ring = static_cast<std::int64_t>(std::ceil(max_dist / cell_)) + 1;
  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    // cells at Chebyshev distance `ring` can hold segments no closer than
    // (ring - 1) * cell_; stop once the best hit beats that bound
    double ring_min = (static_cast<double>(ring) - 1.0) * cell_;
    if (best && best->distance < ring_min) break;
    if (ring_min > max_dist) break;
    for (std::int64_t dx = -ring; dx <= ring; ++dx) {
      for (std::int64_t dy = -ring; dy <= ring; ++dy) {
        if (std::max(std::llabs(dx), std::llabs(dy)) != ring) continue;
        const std::vector<int>* b = bucket(pcx + dx, pcy + dy);
        if (!b) continue;
        for (int idx : *b) consider(idx);
      }
    }
  }
  return best;
}

bool SegmentIndex::any_within(const Point& p, double max_dist) const {
  if (!built_) throw InternalError("SegmentIndex::any_within before build()");
  if (segs_.empty()) return false;
  std::int64_t pcx = cell_of(p.x), pcy = cell_of(p.y);
  std::int64_t max_ring = static_cast<std::int64_t>(std::ceil(max_dist / cell_)) + 1;
  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    double ring_min = (static_cast<double>(ring) - 1.0) * cell_;
    if (ring_min > max_dist) break;
    for (std::int64_t dx = -ring; dx <= ring; ++dx) {
      for (std::int64_t dy = -ring; dy <= ring; ++dy) {
        if (std::max(std::llabs(dx), std::llabs(dy)) != ring) continue;
        const std::vector<int>* b = bucket(pcx + dx, pcy + dy);
        if (!b) continue;
        for (int idx : *b) {
          const Seg& s = segs_[idx];
          if (point_segment_dist(p, s.a, s.b) <= max_dist) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace cityind
