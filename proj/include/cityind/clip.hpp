#pragma once

#include <string>
#include <vector>

#include "cityind/geom.hpp"

namespace cityind {

MultiPolygon geom_union(const MultiPolygon& a, const MultiPolygon& b);
MultiPolygon geom_intersection(const MultiPolygon& a, const MultiPolygon& b);
MultiPolygon geom_difference(const MultiPolygon& a, const MultiPolygon& b);

// Union of many parts, merged pairwise in a balanced tree so intermediate
// results stay small.
MultiPolygon union_all(std::vector<MultiPolygon> parts);

// Outward offset with round joins; dist == 0 returns the input unchanged.
// Negative dist shrinks.
MultiPolygon buffer(const MultiPolygon& mp, double dist, int segments_per_circle = 32);

MultiPolygon remove_holes(MultiPolygon mp);

// Touch or overlap.
bool geoms_intersect(const MultiPolygon& a, const MultiPolygon& b);

double overlap_area(const MultiPolygon& a, const MultiPolygon& b);

// Rejects self-intersections and other structural defects; ring
// orientation/closure problems are normalized before the check and do
// not count as defects.
bool polygon_valid(const Polygon& p, std::string* reason = nullptr);

// Orientation normalization: outer CCW, holes CW.
void normalize_orientation(MultiPolygon& mp);

// Drop polygons with area below min_area (cleanup after boolean ops).
MultiPolygon drop_slivers(MultiPolygon mp, double min_area = 1e-6);

}  // namespace cityind
