#include "cityind/mbc.hpp"

#include <cmath>
#include <cstdint>

namespace cityind {

namespace {
constexpr double kEps = 1e-7;

bool in_circle(const Circle& c, const Point& p) {
  return dist(c.center, p) <= c.radius + kEps * (1.0 + c.radius);
}

Circle from_two(const Point& a, const Point& b) {
  Point c = {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5};
  return {c, dist(a, b) * 0.5};
}

Circle from_three(const Point& a, const Point& b, const Point& c) {
  double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  if (d == 0.0) {
    // collinear: widest pair
    Circle best = from_two(a, b);
    Circle bc = from_two(b, c);
    Circle ac = from_two(a, c);
    if (bc.radius > best.radius) best = bc;
    if (ac.radius > best.radius) best = ac;
    return best;
  }
  double a2 = a.x * a.x + a.y * a.y;
  double b2 = b.x * b.x + b.y * b.y;
  double c2 = c.x * c.x + c.y * c.y;
  Point ctr = {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
               (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  return {ctr, dist(ctr, a)};
}
}  // namespace

Circle min_bounding_circle(std::vector<Point> pts) {
  if (pts.empty()) return {};
  if (pts.size() == 1) return {pts[0], 0.0};

  // Deterministic shuffle (fixed LCG) for Welzl's expected-linear behavior.
  std::uint64_t state = 0x2545F4914F6CDD1DULL;
  for (size_t i = pts.size() - 1; i > 0; --i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    size_t j = static_cast<size_t>((state >> 33) % (i + 1));
    std::swap(pts[i], pts[j]);
  }

  Circle c = from_two(pts[0], pts[1]);
  for (size_t i = 2; i < pts.size(); ++i) {
    if (in_circle(c, pts[i])) continue;
    // pts[i] on the boundary of the new circle
    c = from_two(pts[0], pts[i]);
    for (size_t j = 1; j < i; ++j) {
      if (in_circle(c, pts[j])) continue;
      c = from_two(pts[i], pts[j]);
      for (size_t k = 0; k < j; ++k) {
        if (in_circle(c, pts[k])) continue;
        c = from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

}  // namespace cityind
