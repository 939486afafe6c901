#include "cityind/geojson.hpp"

#include <fstream>
#include <sstream>

#include "cityind/clip.hpp"
#include "cityind/util.hpp"

namespace cityind {

using nlohmann::ordered_json;

namespace {

std::string scalar_to_string(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt_double(v.get<double>());
  return v.dump();
}

Point parse_position(const ordered_json& coords, const std::string& ctx) {
  if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() || !coords[1].is_number())
    throw InputError(ctx + ": bad coordinate position");
  return {coords[0].get<double>(), coords[1].get<double>()};
}

Ring parse_ring(const ordered_json& arr, const std::string& ctx) {
  Ring r;
  if (!arr.is_array()) throw InputError(ctx + ": ring is not an array");
  for (const auto& pos : arr) r.push_back(parse_position(pos, ctx));
  // GeoJSON rings repeat the first vertex; store open
  if (r.size() >= 2 && r.front() == r.back()) r.pop_back();
  if (r.size() < 3) throw InputError(ctx + ": ring with fewer than 3 distinct vertices");
  return r;
}

Polygon parse_polygon_coords(const ordered_json& arr, const std::string& ctx) {
  Polygon p;
  if (!arr.is_array() || arr.empty()) throw InputError(ctx + ": empty polygon coordinates");
  p.outer = parse_ring(arr[0], ctx);
  for (size_t i = 1; i < arr.size(); ++i) p.holes.push_back(parse_ring(arr[i], ctx));
  return p;
}

ordered_json ring_to_json(const Ring& r) {
  ordered_json arr = ordered_json::array();
  for (const Point& p : r) arr.push_back({p.x, p.y});
  if (!r.empty()) arr.push_back({r.front().x, r.front().y});
  return arr;
}

ordered_json polygon_to_json(const Polygon& p) {
  ordered_json arr = ordered_json::array();
  arr.push_back(ring_to_json(p.outer));
  for (const Ring& h : p.holes) arr.push_back(ring_to_json(h));
  return arr;
}

}  // namespace

TagMap Feature::tags() const {
  TagMap out;
  for (auto it = properties.begin(); it != properties.end(); ++it) {
    if (it.key() == "tags" && it.value().is_object()) {
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
        out[jt.key()] = scalar_to_string(jt.value());
    } else if (!it.value().is_object() && !it.value().is_array()) {
      out[it.key()] = scalar_to_string(it.value());
    }
  }
  return out;
}

std::string Feature::prop_string(const std::string& key) const {
  if (!properties.contains(key)) return "";
  return scalar_to_string(properties.at(key));
}

FeatureFile parse_geojson(const std::string& text, const std::string& ctx) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(ctx + ": JSON parse error: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
    throw InputError(ctx + ": not a GeoJSON FeatureCollection");

  FeatureFile out;
  if (doc.contains("schema") && doc["schema"].is_string())
    out.schema = doc["schema"].get<std::string>();
  if (doc.contains("crs")) {
    const auto& crs = doc["crs"];
    if (crs.is_string()) {
      out.crs_label = crs.get<std::string>();
    } else if (crs.is_object() && crs.contains("properties") &&
               crs["properties"].is_object() && crs["properties"].contains("name")) {
      out.crs_label = crs["properties"]["name"].get<std::string>();
    }
  }

  if (!doc.contains("features") || !doc["features"].is_array())
    throw InputError(ctx + ": missing features array");

  for (const auto& jf : doc["features"]) {
    if (!jf.is_object()) throw InputError(ctx + ": feature is not an object");
    Feature f;
    if (jf.contains("properties") && jf["properties"].is_object()) f.properties = jf["properties"];
    if (!jf.contains("geometry") || jf["geometry"].is_null()) {
      out.features.push_back(std::move(f));
      continue;
    }
    const auto& g = jf["geometry"];
    std::string type = g.value("type", "");
    const auto& coords = g.contains("coordinates") ? g["coordinates"] : ordered_json();
    if (type == "Point") {
      f.kind = GeomKind::Point;
      f.point = parse_position(coords, ctx);
    } else if (type == "LineString") {
      f.kind = GeomKind::LineString;
      for (const auto& pos : coords) f.line.push_back(parse_position(pos, ctx));
      if (f.line.size() < 2) throw InputError(ctx + ": LineString with fewer than 2 points");
    } else if (type == "Polygon") {
      f.kind = GeomKind::Polygon;
      f.mpoly.polys.push_back(parse_polygon_coords(coords, ctx));
    } else if (type == "MultiPolygon") {
      f.kind = GeomKind::MultiPolygon;
      for (const auto& pc : coords) f.mpoly.polys.push_back(parse_polygon_coords(pc, ctx));
    } else if (type == "MultiLineString") {
      // split into independent LineString features, preserving part order
      bool first = true;
      for (const auto& lc : coords) {
        Feature part;
        part.kind = GeomKind::LineString;
        part.properties = f.properties;
        for (const auto& pos : lc) part.line.push_back(parse_position(pos, ctx));
        if (part.line.size() < 2) throw InputError(ctx + ": MultiLineString part with fewer than 2 points");
        if (first) {
          f.kind = GeomKind::LineString;
          f.line = std::move(part.line);
          first = false;
        } else {
          out.features.push_back(std::move(f));
          f = std::move(part);
        }
      }
      if (first) throw InputError(ctx + ": empty MultiLineString");
    } else {
      throw InputError(ctx + ": unsupported geometry type '" + type + "'");
    }
    normalize_orientation(f.mpoly);
    out.features.push_back(std::move(f));
  }
  return out;
}

FeatureFile read_geojson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_geojson(ss.str(), path);
}

void write_geojson(const std::string& path, const FeatureFile& file) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  if (!file.schema.empty()) doc["schema"] = file.schema;
  if (!file.crs_label.empty())
    doc["crs"] = {{"type", "name"}, {"properties", {{"name", file.crs_label}}}};
  ordered_json feats = ordered_json::array();
  for (const Feature& f : file.features) {
    ordered_json jf;
    jf["type"] = "Feature";
    jf["properties"] = f.properties;
    ordered_json g;
    switch (f.kind) {
      case GeomKind::Point:
        g["type"] = "Point";
        g["coordinates"] = {f.point.x, f.point.y};
        break;
      case GeomKind::LineString: {
        g["type"] = "LineString";
        ordered_json arr = ordered_json::array();
        for (const Point& p : f.line) arr.push_back({p.x, p.y});
        g["coordinates"] = arr;
        break;
      }
      case GeomKind::Polygon:
        if (f.mpoly.polys.size() == 1) {
          g["type"] = "Polygon";
          g["coordinates"] = polygon_to_json(f.mpoly.polys[0]);
          break;
        }
        [[fallthrough]];
      case GeomKind::MultiPolygon: {
        g["type"] = "MultiPolygon";
        ordered_json arr = ordered_json::array();
        for (const Polygon& p : f.mpoly.polys) arr.push_back(polygon_to_json(p));
        g["coordinates"] = arr;
        break;
      }
      case GeomKind::None:
        g = nullptr;
        break;
    }
    jf["geometry"] = g;
    feats.push_back(std::move(jf));
  }
  doc["features"] = std::move(feats);

  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw InputError("cannot write file: " + path);
  outf << doc.dump(1) << "\n";
}

}  // namespace cityind
