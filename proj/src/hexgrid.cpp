#include "cityind/hexgrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cityind/util.hpp"

namespace cityind {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double HexGrid::cell_area_m2() const {
  // regular hexagon, circumradius R: area = (3*sqrt(3)/2) R^2
  return 1.5 * kSqrt3 * radius_ * radius_;
}

Point HexGrid::center(HexKey k) const {
  double x = anchor_.x + kSqrt3 * radius_ * (static_cast<double>(k.q) + static_cast<double>(k.r) / 2.0);
  double y = anchor_.y + 1.5 * radius_ * static_cast<double>(k.r);
  return {x, y};
}

namespace {
// unit offsets of the six pointy-top vertices, computed once
const std::array<Point, 6>& hex_unit() {
  static const std::array<Point, 6> v = [] {
    std::array<Point, 6> out;
    for (int i = 0; i < 6; ++i) {
      double ang = kPi / 180.0 * (30.0 + 60.0 * i);
      out[i] = {std::cos(ang), std::sin(ang)};
    }
    return out;
  }();
  return v;
}
}  // namespace

Ring HexGrid::cell_polygon(HexKey k) const {
  Point c = center(k);
  Ring ring;
  ring.reserve(6);
  for (const Point& u : hex_unit())
    ring.push_back({c.x + radius_ * u.x, c.y + radius_ * u.y});
  return ring;
}

HexKey HexGrid::containing(const Point& p) const {
  double px = p.x - anchor_.x;
  double py = p.y - anchor_.y;
  double qf = (kSqrt3 / 3.0 * px - py / 3.0) / radius_;
  double rf = (2.0 / 3.0 * py) / radius_;
  // cube rounding
  double sf = -qf - rf;
  double q = std::round(qf), r = std::round(rf), s = std::round(sf);
  double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
  if (dq > dr && dq > ds)
    q = -r - s;
  else if (dr > ds)
    r = -q - s;
  HexKey base{static_cast<int>(q), static_cast<int>(r)};

  // Boundary points may be contained by a neighbour as well; the contract
  // picks the lexicographically lowest containing key.
  static const int nq[] = {0, 1, 1, 0, -1, -1, 0};
  static const int nr[] = {0, 0, -1, -1, 0, 1, 1};
  HexKey best = base;
  bool found = false;
  for (int i = 0; i < 7; ++i) {
    HexKey k{base.q + nq[i], base.r + nr[i]};
    if (point_in_ring(p, cell_polygon(k))) {
      if (!found || k < best) best = k;
      found = true;
    }
  }
  return found ? best : base;
}

void HexGrid::insert(HexKey k) {
  HexCellData d;
  d.center = center(k);
  cells_.emplace(k, d);
}

std::vector<HexKey> HexGrid::keys_sorted() const {
  std::vector<HexKey> keys;
  keys.reserve(cells_.size());
  for (const auto& [k, v] : cells_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

namespace {

bool hex_intersects(const Ring& hex, const MultiPolygon& mp, const Box& mp_box) {
  Box hb = bounds(hex);
  if (hb.maxx < mp_box.minx || hb.minx > mp_box.maxx || hb.maxy < mp_box.miny ||
      hb.miny > mp_box.maxy)
    return false;
  for (const Point& v : hex)
    if (contains(mp, v)) return true;
  for (const Polygon& poly : mp.polys) {
    auto ring_check = [&](const Ring& r) {
      for (const Point& v : r)
        if (point_in_ring(v, hex)) return true;
      size_t n = r.size();
      for (size_t i = 0; i < n; ++i) {
        const Point& a = r[i];
        const Point& b = r[(i + 1) % n];
        for (size_t j = 0; j < hex.size(); ++j)
          if (segments_intersect(a, b, hex[j], hex[(j + 1) % hex.size()])) return true;
      }
      return false;
    };
    if (ring_check(poly.outer)) return true;
    for (const Ring& h : poly.holes)
      if (ring_check(h)) return true;
  }
  return false;
}

}  // namespace

HexGrid build_hex_grid(const StudyRegion& region, const ProjectConfig& config) {
  Box bb = bounds(region.buffered);
  if (!bb.valid()) throw InputError("hex grid: region has no extent");
  HexGrid grid(config.hex_diag_m, {bb.minx, bb.miny});
  double R = grid.radius();
  double height = bb.maxy - bb.miny;
  double width = bb.maxx - bb.minx;

  int r_lo = static_cast<int>(std::floor(-R / (1.5 * R))) - 1;
  int r_hi = static_cast<int>(std::ceil((height + R) / (1.5 * R))) + 1;
  for (int r = r_lo; r <= r_hi; ++r) {
    double row_shift = static_cast<double>(r) / 2.0;
    int q_lo = static_cast<int>(std::floor(-R / (kSqrt3 * R) - row_shift)) - 1;
    int q_hi = static_cast<int>(std::ceil((width + R) / (kSqrt3 * R) - row_shift)) + 1;
    for (int q = q_lo; q <= q_hi; ++q) {
      HexKey k{q, r};
      if (hex_intersects(grid.cell_polygon(k), region.buffered, bb)) grid.insert(k);
    }
  }
  if (grid.size() == 0) throw InternalError("hex grid: tessellation produced no cells");
  return grid;
}

ApportionStats apportion_population(HexGrid& grid, const PopulationRaster& raster,
                                    double pop_min_threshold) {
  ApportionStats stats;
  double R = grid.radius();
  Point anchor = grid.anchor();

  for (const RasterCell& cell : raster.cells) {
    double half = cell.size / 2.0;
    Ring square = {{cell.x - half, cell.y - half},
                   {cell.x + half, cell.y - half},
                   {cell.x + half, cell.y + half},
                   {cell.x - half, cell.y + half}};
    // candidate hexes by axial range over the square's bbox
    int r_lo = static_cast<int>(std::floor((cell.y - half - R - anchor.y) / (1.5 * R))) - 1;
    int r_hi = static_cast<int>(std::ceil((cell.y + half + R - anchor.y) / (1.5 * R))) + 1;
    std::vector<std::pair<HexKey, double>> shares;
    double covered = 0.0;
    for (int r = r_lo; r <= r_hi; ++r) {
      double row_shift = static_cast<double>(r) / 2.0;
      int q_lo = static_cast<int>(std::floor((cell.x - half - R - anchor.x) / (kSqrt3 * R) - row_shift)) - 1;
      int q_hi = static_cast<int>(std::ceil((cell.x + half + R - anchor.x) / (kSqrt3 * R) - row_shift)) + 1;
      for (int q = q_lo; q <= q_hi; ++q) {
        HexKey k{q, r};
        if (!grid.has(k)) continue;
        Ring overlap = clip_ring_convex(square, grid.cell_polygon(k));
        double a = std::abs(ring_signed_area(overlap));
        if (a > 0.0) {
          shares.emplace_back(k, a);
          covered += a;
        }
      }
    }
    if (covered <= 0.0) {
      stats.dropped += cell.population;
      stats.dropped_cells += 1;
      continue;
    }
    // proportional to overlap, normalized over the covered part so the
    // cell's population is conserved within the grid
    for (const auto& [k, a] : shares) {
      double share = cell.population * (a / covered);
      grid.cell(k).population += share;
      stats.assigned += share;
    }
  }

  for (auto& [k, data] : grid.cells())
    data.populated = data.population >= pop_min_threshold;
  return stats;
}

}  // namespace cityind
