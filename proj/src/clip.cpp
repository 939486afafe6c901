#include "cityind/clip.hpp"

// Boost 1.74 still rescales coordinates inside set operations, which
// perturbs results at the 1e-8 level and breaks permutation stability of
// unions. The non-rescaled kernels are the ones later Boost versions use
// unconditionally.
#define BOOST_GEOMETRY_NO_ROBUSTNESS

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "cityind/util.hpp"

namespace cityind {

namespace {
namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
// CCW, closed: matches our outer-ring convention directly.
using BPolygon = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPolygon>;

void to_bring(const Ring& r, BPolygon::ring_type& out) {
  out.clear();
  out.reserve(r.size() + 1);
  for (const Point& p : r) out.emplace_back(p.x, p.y);
  if (!r.empty()) out.emplace_back(r.front().x, r.front().y);
}

BMulti to_boost(const MultiPolygon& mp) {
  BMulti out;
  for (const Polygon& p : mp.polys) {
    BPolygon bp;
    to_bring(p.outer, bp.outer());
    for (const Ring& h : p.holes) {
      bp.inners().emplace_back();
      to_bring(h, bp.inners().back());
    }
    bg::correct(bp);
    out.push_back(std::move(bp));
  }
  return out;
}

Ring from_bring(const BPolygon::ring_type& r) {
  Ring out;
  size_t n = r.size();
  if (n > 1) n -= 1;  // drop closing duplicate
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back({bg::get<0>(r[i]), bg::get<1>(r[i])});
  return out;
}

MultiPolygon from_boost(const BMulti& bm) {
  MultiPolygon out;
  for (const BPolygon& bp : bm) {
    Polygon p;
    p.outer = from_bring(bp.outer());
    if (p.outer.size() < 3) continue;
    for (const auto& h : bp.inners()) {
      Ring hr = from_bring(h);
      if (hr.size() >= 3) p.holes.push_back(std::move(hr));
    }
    out.polys.push_back(std::move(p));
  }
  return out;
}
}  // namespace

MultiPolygon geom_union(const MultiPolygon& a, const MultiPolygon& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  BMulti out;
  bg::union_(to_boost(a), to_boost(b), out);
  return from_boost(out);
}

MultiPolygon geom_intersection(const MultiPolygon& a, const MultiPolygon& b) {
  if (a.empty() || b.empty()) return {};
  BMulti out;
  bg::intersection(to_boost(a), to_boost(b), out);
  return from_boost(out);
}

MultiPolygon geom_difference(const MultiPolygon& a, const MultiPolygon& b) {
  if (a.empty()) return {};
  if (b.empty()) return a;
  BMulti out;
  bg::difference(to_boost(a), to_boost(b), out);
  return from_boost(out);
}

MultiPolygon union_all(std::vector<MultiPolygon> parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<MultiPolygon> next;
    next.reserve((parts.size() + 1) / 2);
    for (size_t i = 0; i + 1 < parts.size(); i += 2)
      next.push_back(geom_union(parts[i], parts[i + 1]));
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return parts.front();
}

MultiPolygon buffer(const MultiPolygon& mp, double d, int segments_per_circle) {
  if (d == 0.0 || mp.empty()) return mp;
  BMulti out;
  bg::strategy::buffer::distance_symmetric<double> dist(d);
  bg::strategy::buffer::join_round join(segments_per_circle);
  bg::strategy::buffer::end_round end(segments_per_circle);
  bg::strategy::buffer::point_circle circle(segments_per_circle);
  bg::strategy::buffer::side_straight side;
  bg::buffer(to_boost(mp), out, dist, side, join, end, circle);
  return from_boost(out);
}

MultiPolygon remove_holes(MultiPolygon mp) {
  for (Polygon& p : mp.polys) p.holes.clear();
  return mp;
}

bool geoms_intersect(const MultiPolygon& a, const MultiPolygon& b) {
  if (a.empty() || b.empty()) return false;
  Box ba = bounds(a), bb = bounds(b);
  if (ba.maxx < bb.minx || bb.maxx < ba.minx || ba.maxy < bb.miny || bb.maxy < ba.miny)
    return false;
  return bg::intersects(to_boost(a), to_boost(b));
}

double overlap_area(const MultiPolygon& a, const MultiPolygon& b) {
  if (a.empty() || b.empty()) return 0.0;
  BMulti out;
  bg::intersection(to_boost(a), to_boost(b), out);
  return bg::area(out);
}

bool polygon_valid(const Polygon& p, std::string* reason) {
  MultiPolygon mp;
  mp.polys.push_back(p);
  BMulti bm = to_boost(mp);  // correct() fixes orientation/closure first
  std::string msg;
  bool ok = bg::is_valid(bm, msg);
  if (!ok && reason) *reason = msg;
  return ok;
}

void normalize_orientation(MultiPolygon& mp) {
  for (Polygon& p : mp.polys) {
    if (ring_signed_area(p.outer) < 0.0) std::reverse(p.outer.begin(), p.outer.end());
    for (Ring& h : p.holes)
      if (ring_signed_area(h) > 0.0) std::reverse(h.begin(), h.end());
  }
}

MultiPolygon drop_slivers(MultiPolygon mp, double min_area) {
  MultiPolygon out;
  for (Polygon& p : mp.polys)
    if (polygon_area(p) >= min_area) out.polys.push_back(std::move(p));
  return out;
}

}  // namespace cityind
