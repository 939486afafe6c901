#pragma once

#include <vector>

#include "cityind/geom.hpp"

namespace cityind {

struct Circle {
  Point center;
  double radius = 0.0;
  double area() const { return 3.14159265358979323846 * radius * radius; }
};

// Smallest enclosing circle (Welzl, move-to-front, fixed deterministic
// shuffle). Empty input yields radius 0 at the origin.
Circle min_bounding_circle(std::vector<Point> pts);

}  // namespace cityind
