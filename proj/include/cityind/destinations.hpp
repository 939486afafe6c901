#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cityind/geojson.hpp"
#include "cityind/geom.hpp"

namespace cityind {

// Canonical destination category keys.
inline constexpr const char* kHealthyFood = "healthy_food_market";
inline constexpr const char* kConvenience = "convenience";
inline constexpr const char* kPtAny = "pt_any";

// Key/value classification table; keys and values are matched after tag
// normalization (lowercase, ' '/'-' folded to '_').
std::vector<std::string> classify(const TagMap& tags);

// Points pass through; polygons contribute their area centroid; a
// zero-area polygon degrades to its first vertex (warned). Other
// geometries are rejected.
std::optional<Point> feature_to_point(const Feature& f, std::string* warning = nullptr);

struct DestinationSet {
  std::string category;
  std::vector<Point> points;
  int dropped_outside = 0;  // filled by clip_to_region
};

// One set per distinct value of name_field; coordinates must already be
// projected metres (no reprojection happens here).
std::vector<DestinationSet> load_custom_destinations(const std::string& csv_path,
                                                     const std::string& name_field,
                                                     const std::string& full_name_field,
                                                     const std::string& x_field,
                                                     const std::string& y_field);

// Keeps only points inside `region`, recording the dropped count.
void clip_to_region(DestinationSet& set, const MultiPolygon& region);

}  // namespace cityind
