#include "cityind/geom.hpp"

#include <algorithm>

namespace cityind {

double ring_signed_area(const Ring& r) {
  double s = 0.0;
  size_t n = r.size();
  if (n < 3) return 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = r[i];
    const Point& b = r[(i + 1) % n];
    s += cross(a, b);
  }
  return 0.5 * s;
}

double polygon_area(const Polygon& p) {
  double a = std::abs(ring_signed_area(p.outer));
  for (const Ring& h : p.holes) a -= std::abs(ring_signed_area(h));
  return a;
}

double area(const MultiPolygon& mp) {
  double a = 0.0;
  for (const Polygon& p : mp.polys) a += polygon_area(p);
  return a;
}

namespace {
// signed-area-weighted centroid of one ring
void ring_centroid_acc(const Ring& r, double sign, double& ax, double& cx, double& cy) {
  size_t n = r.size();
  if (n < 3) return;
  double a = 0.0, sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& p = r[i];
    const Point& q = r[(i + 1) % n];
    double c = cross(p, q);
    a += c;
    sx += (p.x + q.x) * c;
    sy += (p.y + q.y) * c;
  }
  a *= 0.5;
  double w = sign * std::abs(a);
  if (a == 0.0) return;
  // centroid of ring = (sx, sy) / (6a); accumulate weighted
  ax += w;
  cx += w * (sx / (6.0 * a));
  cy += w * (sy / (6.0 * a));
}
}  // namespace

Point centroid(const MultiPolygon& mp) {
  double aw = 0.0, cx = 0.0, cy = 0.0;
  for (const Polygon& p : mp.polys) {
    ring_centroid_acc(p.outer, +1.0, aw, cx, cy);
    for (const Ring& h : p.holes) ring_centroid_acc(h, -1.0, aw, cx, cy);
  }
  if (aw > 0.0) return {cx / aw, cy / aw};
  for (const Polygon& p : mp.polys)
    if (!p.outer.empty()) return p.outer.front();
  return {};
}

Box bounds(const std::vector<Point>& pts) {
  Box b;
  for (const Point& p : pts) b.expand(p);
  return b;
}

Box bounds(const MultiPolygon& mp) {
  Box b;
  for (const Polygon& p : mp.polys)
    for (const Point& pt : p.outer) b.expand(pt);
  return b;
}

namespace {
constexpr double kOnBoundaryEps = 1e-9;

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return point_segment_dist(p, a, b) <= kOnBoundaryEps;
}
}  // namespace

bool point_in_ring(const Point& p, const Ring& r) {
  size_t n = r.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i)
    if (on_segment(p, r[i], r[(i + 1) % n])) return true;
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = r[i];
    const Point& b = r[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

bool point_in_polygon(const Point& p, const Polygon& poly) {
  if (!point_in_ring(p, poly.outer)) return false;
  for (const Ring& h : poly.holes) {
    // boundary of a hole still counts as inside the polygon
    size_t n = h.size();
    bool on_edge = false;
    for (size_t i = 0; i < n && !on_edge; ++i)
      if (on_segment(p, h[i], h[(i + 1) % n])) on_edge = true;
    if (on_edge) continue;
    if (point_in_ring(p, h)) return false;
  }
  return true;
}

bool contains(const MultiPolygon& mp, const Point& p) {
  for (const Polygon& poly : mp.polys)
    if (point_in_polygon(p, poly)) return true;
  return false;
}

double point_segment_dist(const Point& p, const Point& a, const Point& b, double* t_out) {
  Point ab = b - a;
  double len2 = dot(ab, ab);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  Point c = a + ab * t;
  if (t_out) *t_out = t;
  return dist(p, c);
}

namespace {
int orient(const Point& a, const Point& b, const Point& c) {
  double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool bbox_overlap(const Point& a, const Point& b, const Point& c, const Point& d) {
  return std::min(a.x, b.x) <= std::max(c.x, d.x) && std::min(c.x, d.x) <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= std::max(c.y, d.y) && std::min(c.y, d.y) <= std::max(a.y, b.y);
}
}  // namespace

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (!bbox_overlap(a, b, c, d)) return false;
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && o2 == 0) return true;  // collinear with overlapping bbox
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

double polyline_length(const Polyline& line) {
  double s = 0.0;
  for (size_t i = 1; i < line.size(); ++i) s += dist(line[i - 1], line[i]);
  return s;
}

Point point_along(const Polyline& line, double s) {
  if (line.empty()) return {};
  if (s <= 0.0) return line.front();
  for (size_t i = 1; i < line.size(); ++i) {
    double seg = dist(line[i - 1], line[i]);
    if (s <= seg) {
      if (seg == 0.0) return line[i - 1];
      double t = s / seg;
      return line[i - 1] + (line[i] - line[i - 1]) * t;
    }
    s -= seg;
  }
  return line.back();
}

Polyline clip_polyline(const Polyline& line, double s0, double s1) {
  Polyline out;
  if (line.size() < 2 || s1 <= s0) return out;
  double acc = 0.0;
  out.push_back(point_along(line, s0));
  for (size_t i = 1; i < line.size(); ++i) {
    double seg = dist(line[i - 1], line[i]);
    double start = acc, end = acc + seg;
    if (end > s0 && start < s1) {
      if (end <= s1) {
        if (!(line[i] == out.back())) out.push_back(line[i]);
      } else {
        Point p = point_along(line, s1);
        if (!(p == out.back())) out.push_back(p);
        break;
      }
    }
    acc = end;
    if (acc >= s1) break;
  }
  if (out.size() < 2) {
    Point p = point_along(line, s1);
    if (out.empty() || !(p == out.back())) out.push_back(p);
  }
  return out;
}

Ring clip_ring_convex(const Ring& subject, const Ring& convex_ccw) {
  Ring poly = subject;
  size_t m = convex_ccw.size();
  for (size_t i = 0; i < m && !poly.empty(); ++i) {
    const Point& a = convex_ccw[i];
    const Point& b = convex_ccw[(i + 1) % m];
    Ring next;
    size_t n = poly.size();
    for (size_t j = 0; j < n; ++j) {
      const Point& p = poly[j];
      const Point& q = poly[(j + 1) % n];
      double sp = cross(b - a, p - a);
      double sq = cross(b - a, q - a);
      bool pin = sp >= 0.0, qin = sq >= 0.0;
      if (pin) next.push_back(p);
      if (pin != qin) {
        double t = sp / (sp - sq);
        next.push_back(p + (q - p) * t);
      }
    }
    poly = std::move(next);
  }
  return poly;
}

bool segment_intersects_convex(const Point& a, const Point& b, const Ring& convex_ccw) {
  if (point_in_ring(a, convex_ccw) || point_in_ring(b, convex_ccw)) return true;
  size_t n = convex_ccw.size();
  for (size_t i = 0; i < n; ++i)
    if (segments_intersect(a, b, convex_ccw[i], convex_ccw[(i + 1) % n])) return true;
  return false;
}

}  // namespace cityind
