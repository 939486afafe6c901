#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cityind/geom.hpp"

namespace cityind {

enum class GeomKind { None, Point, LineString, Polygon, MultiPolygon };

using TagMap = std::map<std::string, std::string>;

struct Feature {
  GeomKind kind = GeomKind::None;
  Point point;
  Polyline line;
  MultiPolygon mpoly;
  nlohmann::ordered_json properties = nlohmann::ordered_json::object();

  // String view of properties; a nested "tags" object is merged in.
  // Non-string scalars are stringified, null values become "".
  TagMap tags() const;
  bool has_prop(const std::string& key) const { return properties.contains(key); }
  std::string prop_string(const std::string& key) const;
};

struct FeatureFile {
  std::vector<Feature> features;
  std::string crs_label;  // opaque; empty when the file declares none
  std::string schema;
};

FeatureFile read_geojson(const std::string& path);
FeatureFile parse_geojson(const std::string& text, const std::string& context);

// Writer is deterministic for identical inputs (ordered properties,
// shortest round-trip numbers from the json library).
void write_geojson(const std::string& path, const FeatureFile& file);

}  // namespace cityind
