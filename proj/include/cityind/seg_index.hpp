#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cityind/geom.hpp"

namespace cityind {

// Uniform grid-bucket index over line segments. Queries are deterministic:
// ties on distance resolve to the lowest object id, then segment index.
class SegmentIndex {
 public:
  struct Hit {
    int object_id = -1;
    int seg_index = -1;
    double t = 0.0;  // projection parameter on the segment
    double distance = 0.0;
    Point closest;
  };

  void add(int object_id, int seg_index, const Point& a, const Point& b);
  // cell_size <= 0 picks a size from the average segment length
  void build(double cell_size = 0.0);

  bool empty() const { return segs_.empty(); }

  std::optional<Hit> nearest(const Point& p, double max_dist) const;
  bool any_within(const Point& p, double max_dist) const;

 private:
  struct Seg {
    Point a, b;
    int object_id;
    int seg_index;
  };

  std::int64_t cell_of(double v) const;
  const std::vector<int>* bucket(std::int64_t cx, std::int64_t cy) const;

  std::vector<Seg> segs_;
  double cell_ = 1.0;
  bool built_ = false;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace cityind
