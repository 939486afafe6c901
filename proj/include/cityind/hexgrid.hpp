#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/geom.hpp"
#include "cityind/region.hpp"

namespace cityind {

struct HexKey {
  int q = 0;
  int r = 0;
  friend bool operator==(const HexKey& a, const HexKey& b) { return a.q == b.q && a.r == b.r; }
  friend bool operator<(const HexKey& a, const HexKey& b) {
    return a.q != b.q ? a.q < b.q : a.r < b.r;
  }
};

struct HexKeyHash {
  std::size_t operator()(const HexKey& k) const {
    return std::hash<std::uint64_t>()((static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.q)) << 32) |
                                      static_cast<std::uint32_t>(k.r));
  }
};

struct HexCellData {
  Point center;
  double population = 0.0;
  bool populated = false;
};

// Regular pointy-top hexagons, long diagonal = hex_diag_m, axial lattice
// anchored at the buffered region's bounding-box minimum.
class HexGrid {
 public:
  HexGrid() = default;
  HexGrid(double diag_m, Point anchor) : radius_(diag_m / 2.0), anchor_(anchor) {}

  double radius() const { return radius_; }
  Point anchor() const { return anchor_; }
  double cell_area_m2() const;  // (3*sqrt(3)/8) * diag^2
  double cell_area_km2() const { return cell_area_m2() / 1e6; }

  Point center(HexKey k) const;
  Ring cell_polygon(HexKey k) const;  // CCW hexagon

  // Axial cell containing p. Points on a shared boundary resolve to the
  // lexicographically lowest (q, r) among containing cells.
  HexKey containing(const Point& p) const;

  bool has(HexKey k) const { return cells_.count(k) > 0; }
  HexCellData& cell(HexKey k) { return cells_.at(k); }
  const HexCellData& cell(HexKey k) const { return cells_.at(k); }
  void insert(HexKey k);
  std::size_t size() const { return cells_.size(); }
  std::vector<HexKey> keys_sorted() const;

  const std::unordered_map<HexKey, HexCellData, HexKeyHash>& cells() const { return cells_; }
  std::unordered_map<HexKey, HexCellData, HexKeyHash>& cells() { return cells_; }

 private:
  double radius_ = 125.0;
  Point anchor_;
  std::unordered_map<HexKey, HexCellData, HexKeyHash> cells_;
};

// Tessellates the buffered region: every hexagon intersecting it is kept
// whole (no boundary clipping).
HexGrid build_hex_grid(const StudyRegion& region, const ProjectConfig& config);

struct ApportionStats {
  double assigned = 0.0;
  double dropped = 0.0;  // population of cells not touching the grid
  int dropped_cells = 0;
};

// Splits each raster cell's population among the grid hexes it overlaps,
// proportionally to overlap area; sets the populated flag at
// pop_min_threshold.
ApportionStats apportion_population(HexGrid& grid, const PopulationRaster& raster,
                                    double pop_min_threshold);

}  // namespace cityind
