#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace cityind {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(const Point& a, double s) { return {a.x * s, a.y * s}; }
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double dist2(const Point& a, const Point& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Box {
  double minx = std::numeric_limits<double>::infinity();
  double miny = std::numeric_limits<double>::infinity();
  double maxx = -std::numeric_limits<double>::infinity();
  double maxy = -std::numeric_limits<double>::infinity();

  void expand(const Point& p) {
    minx = std::min(minx, p.x);
    miny = std::min(miny, p.y);
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
  void expand(const Box& b) {
    minx = std::min(minx, b.minx);
    miny = std::min(miny, b.miny);
    maxx = std::max(maxx, b.maxx);
    maxy = std::max(maxy, b.maxy);
  }
  bool valid() const { return minx <= maxx && miny <= maxy; }
};

// Rings are stored open (no repeated closing vertex). Outer rings CCW,
// holes CW, normalized at load.
using Ring = std::vector<Point>;
using Polyline = std::vector<Point>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct MultiPolygon {
  std::vector<Polygon> polys;
  bool empty() const { return polys.empty(); }
};

double ring_signed_area(const Ring& r);
double polygon_area(const Polygon& p);
double area(const MultiPolygon& mp);

// Area-weighted centroid over all member polygons (holes subtracted).
// Degenerate (zero total area): returns the first vertex.
Point centroid(const MultiPolygon& mp);

Box bounds(const std::vector<Point>& pts);  // Ring or Polyline
Box bounds(const MultiPolygon& mp);

// Boundary counts as inside.
bool point_in_ring(const Point& p, const Ring& r);
bool point_in_polygon(const Point& p, const Polygon& poly);
bool contains(const MultiPolygon& mp, const Point& p);

// Distance from p to segment ab; if t_out is set it receives the
// projection parameter clamped to [0,1].
double point_segment_dist(const Point& p, const Point& a, const Point& b, double* t_out = nullptr);

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);

double polyline_length(const Polyline& line);
// Point at arc length s (clamped to [0, length]).
Point point_along(const Polyline& line, double s);
// Sub-polyline between arc lengths s0 <= s1.
Polyline clip_polyline(const Polyline& line, double s0, double s1);

// Sutherland-Hodgman: clip any ring against a convex CCW ring.
Ring clip_ring_convex(const Ring& subject, const Ring& convex_ccw);

// Does segment ab intersect (cross or touch) a convex CCW ring, including
// the case of lying fully inside?
bool segment_intersects_convex(const Point& a, const Point& b, const Ring& convex_ccw);

}  // namespace cityind
