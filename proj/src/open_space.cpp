#include "cityind/open_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "cityind/clip.hpp"
#include "cityind/mbc.hpp"
#include "cityind/util.hpp"

namespace cityind {

namespace {

const std::set<std::string>& landuse_values() {
  static const std::set<std::string> v = {
      "common", "conservation", "forest", "garden", "leisure", "park", "recreation_ground",
      "sport", "trees", "village_green", "winter_sports", "wood", "dog_park", "nature_reserve",
      "off_leash", "sports_centre", "riverbank", "beach"};
  return v;
}

const std::set<std::string>& boundary_values() {
  static const std::set<std::string> v = {"national_park", "nature_reserve", "forest",
                                          "state_forest", "state_park", "regional_park", "park",
                                          "county_park"};
  return v;
}

const std::set<std::string>& water_feature_values() {
  static const std::set<std::string> v = {
      "atoll", "awash_rock", "bay", "coastal", "coastline", "coastline_old", "glacier",
      "high_water", "hot_spring", "island", "islet", "lake", "marsh", "oasis",
      "old_coastline_import", "peninsula", "pond", "river", "river_terrace", "riverbank",
      "riverbed", "shoal", "spring", "strait", "stream", "swamp", "swimming_pool",
      "underwater_rock", "unprotected_spring", "unprotected_well", "water", "water_park",
      "waterfall", "waterhole", "waterway", "wetland"};
  return v;
}

const std::set<std::string>& water_sport_values() {
  static const std::set<std::string> v = {"swimming", "surfing", "canoe", "scuba_diving",
                                          "rowing", "sailing", "fishing", "water_ski",
                                          "water_sports", "diving", "windsurfing", "canoeing",
                                          "kayak"};
  return v;
}

// key -> values that mark a feature as not publicly accessible
const std::map<std::string, std::set<std::string>>& non_public_rules() {
  static const std::map<std::string, std::set<std::string>> rules = {
      {"amenity",
       {"aged_care", "animal_boarding", "allotments", "bank", "bar", "bi_ergarten", "boatyard",
        "carpark", "childcare", "casino", "church", "club", "club_house", "college",
        "conference_centre", "embassy", "fast_food", "garden_centre", "grave_yard", "hospital",
        "gym", "kindergarten", "monastery", "motel", "nursing_home", "parking", "parking_space",
        "prison", "retirement", "retirement_home", "retirement_village", "school", "scout_hut",
        "university"}},
      {"leisure",
       {"garden", "golf_course", "horse_riding", "pitch", "racetrack", "summer_camp",
        "sports_club", "stadium", "sports_centre"}},
      {"building", {"yes"}},
      {"area", {"school"}},
      {"natural",
       {"fell", "bay", "bog", "cliff", "geyser", "reef", "scrub", "sinkhole", "strait", "volcano",
        "wetland", "wood", "water"}},
      {"recreation_ground",
       {"showground", "school_playing_field", "horse_racing", "show_grounds",
        "school_playing_fields"}},
      {"sport",
       {"archery", "badminton", "bocce", "boules", "bowls", "croquet", "dog_racing", "equestrian",
        "futsal", "gokarts", "golf", "greyhound_racing", "horse_racing", "karting", "lacross",
        "lacrosse", "lawn_bowls", "motocross", "motor", "motorcycle", "polo", "shooting",
        "snooker", "trugolf"}},
      {"access", {"customers", "private", "no"}},
      {"tourism",
       {"alpine_hut", "apartment", "aquarium", "bed_and_breakfast", "caravan_site", "chalet",
        "gallery", "guest_house", "hostels", "hotel", "information", "motel", "museum",
        "theme_park", "zoo"}},
      {"garden:type",
       {"residential", "private", "commercial", "pub", "school", "roof_garden"}},
  };
  return rules;
}

TagMap normalized(const TagMap& tags) {
  TagMap out;
  for (const auto& [k, v] : tags) out[normalize_tag(k)] = normalize_tag(v);
  return out;
}

}  // namespace

bool is_pos_candidate(const TagMap& raw) {
  TagMap tags = normalized(raw);
  if (tags.count("leisure")) return true;
  if (tags.count("beach")) return true;
  auto place = tags.find("place");
  if (place != tags.end() && place->second == "square") return true;
  auto highway = tags.find("highway");
  if (highway != tags.end() && highway->second == "pedestrian") return true;
  auto landuse = tags.find("landuse");
  if (landuse != tags.end() && landuse_values().count(landuse->second)) return true;
  auto boundary = tags.find("boundary");
  if (boundary != tags.end() && boundary_values().count(boundary->second)) return true;
  return false;
}

bool has_water_value(const TagMap& raw) {
  TagMap tags = normalized(raw);
  for (const auto& [k, v] : tags)
    if (water_feature_values().count(v)) return true;
  return false;
}

bool is_pos_exclusion(const TagMap& raw) {
  TagMap tags = normalized(raw);
  if (tags.count("military") || tags.count("agricultural") || tags.count("forestry")) return true;
  for (const auto& [k, v] : tags) {
    if (water_feature_values().count(v)) return true;
    if (water_sport_values().count(v)) return true;
  }
  return false;
}

bool is_non_public(const TagMap& raw) {
  TagMap tags = normalized(raw);
  for (const auto& [key, values] : non_public_rules()) {
    auto it = tags.find(normalize_tag(key));
    if (it != tags.end() && values.count(it->second)) return true;
  }
  return false;
}

bool has_linear_key(const TagMap& raw) {
  TagMap tags = normalized(raw);
  return tags.count("waterway") > 0 || tags.count("river") > 0;
}

ShapeMetrics shape_metrics(const MultiPolygon& geom) {
  ShapeMetrics m;
  double a = area(geom);
  m.area_ha = a / 1e4;
  std::vector<Point> pts;
  for (const Polygon& p : geom.polys)
    for (const Point& v : p.outer) pts.push_back(v);
  if (pts.empty() || a <= 0.0) {
    m.roundness = 0.0;  // degenerate
    m.mbc_area_m2 = 0.0;
    return m;
  }
  Circle c = min_bounding_circle(pts);
  m.mbc_area_m2 = c.area();
  m.roundness = m.mbc_area_m2 > 0.0 ? a / m.mbc_area_m2 : 0.0;
  return m;
}

bool linear_by_shape(const ShapeMetrics& m) { return m.area_ha > 0.5 && m.roundness < 0.25; }

std::vector<OsCandidate> identify_candidates(const std::vector<Feature>& features) {
  std::vector<OsCandidate> out;
  for (size_t i = 0; i < features.size(); ++i) {
    const Feature& f = features[i];
    if (f.kind != GeomKind::Polygon && f.kind != GeomKind::MultiPolygon) continue;
    TagMap tags = f.tags();
    if (!is_pos_candidate(tags)) continue;
    bool valid = true;
    std::string reason;
    for (const Polygon& p : f.mpoly.polys)
      if (!polygon_valid(p, &reason)) valid = false;
    if (!valid) {
      log_warn("open space: skipping feature " + std::to_string(i) + " with degenerate geometry: " +
               reason);
      continue;
    }
    OsCandidate c;
    c.input_index = static_cast<int>(i);
    c.geom = f.mpoly;
    c.tags = std::move(tags);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<OsCandidate> apply_exclusions(std::vector<OsCandidate> candidates,
                                          const MultiPolygon& exclusion_union) {
  std::vector<OsCandidate> out;
  for (OsCandidate& c : candidates) {
    if (!exclusion_union.empty()) {
      try {
        c.geom = drop_slivers(geom_difference(c.geom, exclusion_union));
      } catch (const std::exception& e) {
        log_warn("open space: clip failed on feature " + std::to_string(c.input_index) + ": " +
                 e.what());
        continue;
      }
    }
    if (c.geom.empty()) continue;
    ShapeMetrics m = shape_metrics(c.geom);
    c.area_ha = m.area_ha;
    c.mbc_area_m2 = m.mbc_area_m2;
    c.roundness = m.roundness;
    c.linear_feature = linear_by_shape(m) || has_linear_key(c.tags);
    c.water = has_water_value(c.tags);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<OpenSpaceArea> merge_contiguous(const std::vector<OsCandidate>& candidates) {
  int n = static_cast<int>(candidates.size());
  std::vector<int> solid;  // indices of non-linear candidates
  for (int i = 0; i < n; ++i)
    if (!candidates[i].linear_feature) solid.push_back(i);

  // transitive grouping of non-linear candidates
  std::vector<int> parent(solid.size());
  for (size_t i = 0; i < solid.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < solid.size(); ++i)
    for (size_t j = i + 1; j < solid.size(); ++j)
      if (geoms_intersect(candidates[solid[i]].geom, candidates[solid[j]].geom))
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));

  std::map<int, std::vector<int>> groups;  // root -> candidate indices
  for (size_t i = 0; i < solid.size(); ++i) groups[find(static_cast<int>(i))].push_back(solid[i]);

  // linear candidates attach only when they touch exactly one group
  for (int i = 0; i < n; ++i) {
    if (!candidates[i].linear_feature) continue;
    std::set<int> touched;
    for (auto& [root, members] : groups)
      for (int m : members)
        if (geoms_intersect(candidates[i].geom, candidates[m].geom)) {
          touched.insert(root);
          break;
        }
    if (touched.size() == 1) groups[*touched.begin()].push_back(i);
    // 0 groups: standalone linear feature, excluded; >=2: would bridge, excluded
  }

  // deterministic order: by smallest input index in the group
  std::vector<std::vector<int>> ordered;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      return candidates[a].input_index < candidates[b].input_index;
    });
    ordered.push_back(members);
  }
  std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
    return candidates[a.front()].input_index < candidates[b.front()].input_index;
  });

  std::vector<OpenSpaceArea> out;
  for (const auto& members : ordered) {
    std::vector<MultiPolygon> parts;
    bool water = false;
    for (int m : members) {
      parts.push_back(candidates[m].geom);
      water = water || candidates[m].water;
    }
    OpenSpaceArea area;
    area.os_id = static_cast<int>(out.size());
    area.geom = union_all(std::move(parts));
    ShapeMetrics sm = shape_metrics(area.geom);
    area.area_ha = sm.area_ha;
    area.mbc_area_m2 = sm.mbc_area_m2;
    area.roundness = sm.roundness;
    area.linear_feature = linear_by_shape(sm);
    area.water = water;
    out.push_back(std::move(area));
  }
  return out;
}

double public_overlap_ha(const OpenSpaceArea& area, const MultiPolygon& non_public_union) {
  if (non_public_union.empty()) return 0.0;
  return overlap_area(area.geom, non_public_union) / 1e4;
}

PosFilterResult filter_and_threshold(std::vector<OpenSpaceArea> areas,
                                     const ProjectConfig& config) {
  PosFilterResult out;
  for (OpenSpaceArea& a : areas) {
    if (a.area_ha * 1e4 < config.pos_min_area_m2) continue;
    a.large = a.public_area_ha > config.pos_large_area_ha;
    a.os_id = static_cast<int>(out.all_pos.size());
    out.all_pos.push_back(std::move(a));
  }
  return out;
}

namespace {

// Entry points for one ring. The ring boundary is sampled at 1 m; maximal
// in-proximity runs become arcs; points go at spacing offsets from each
// arc start. Open arcs get a final point at the arc end when the last
// regular offset falls short by more than 1 m; a fully-covered closed
// ring places no duplicate at offset == perimeter.
void ring_entry_points(const Ring& ring, int os_id, const SegmentIndex& net_index, double spacing,
                       double proximity, std::vector<OsEntryPoint>& out) {
  Polyline closed(ring.begin(), ring.end());
  if (closed.size() < 3) return;
  closed.push_back(ring.front());
  double perimeter = polyline_length(closed);
  if (perimeter <= 0.0) return;

  int nsamples = static_cast<int>(std::floor(perimeter));
  if (nsamples < 1) nsamples = 1;
  std::vector<bool> in_prox(nsamples);
  bool all = true, none = true;
  for (int s = 0; s < nsamples; ++s) {
    Point p = point_along(closed, static_cast<double>(s));
    bool in = net_index.any_within(p, proximity);
    in_prox[s] = in;
    all = all && in;
    none = none && !in;
  }
  if (none) return;

  if (all) {
    for (int k = 0;; ++k) {
      double off = static_cast<double>(k) * spacing;
      if (off >= perimeter - 1e-9) break;  // closed ring: no duplicate at the seam
      out.push_back({os_id, point_along(closed, off)});
    }
    return;
  }

  // maximal runs over the circular sample sequence
  std::vector<std::pair<int, int>> runs;  // [first, last] sample indices
  int s = 0;
  while (s < nsamples) {
    if (!in_prox[s]) {
      ++s;
      continue;
    }
    int start = s;
    while (s < nsamples && in_prox[s]) ++s;
    runs.emplace_back(start, s - 1);
  }
  // wrap-around: merge last run into first when both ends are covered
  bool wrapped = runs.size() >= 2 && runs.front().first == 0 && runs.back().second == nsamples - 1;

  for (size_t i = 0; i < runs.size(); ++i) {
    double arc_start, arc_len;
    if (wrapped && i == 0) {
      arc_start = static_cast<double>(runs.back().first);
      arc_len = (perimeter - arc_start) + static_cast<double>(runs.front().second);
    } else if (wrapped && i == runs.size() - 1) {
      continue;  // consumed by the wrap merge
    } else {
      arc_start = static_cast<double>(runs[i].first);
      arc_len = static_cast<double>(runs[i].second - runs[i].first);
    }
    if (arc_len <= 0.0) {
      out.push_back({os_id, point_along(closed, arc_start)});
      continue;
    }
    double last = 0.0;
    for (int k = 0;; ++k) {
      double off = static_cast<double>(k) * spacing;
      if (off > arc_len) break;
      double s_abs = arc_start + off;
      if (s_abs >= perimeter) s_abs -= perimeter;
      out.push_back({os_id, point_along(closed, s_abs)});
      last = off;
    }
    if (arc_len - last > 1.0) {
      double s_abs = arc_start + arc_len;
      if (s_abs >= perimeter) s_abs -= perimeter;
      out.push_back({os_id, point_along(closed, s_abs)});
    }
  }
}

}  // namespace

std::vector<OsEntryPoint> generate_entry_points(const OpenSpaceArea& area,
                                                const SegmentIndex& net_index, double spacing,
                                                double proximity) {
  std::vector<OsEntryPoint> out;
  if (net_index.empty()) return out;
  for (const Polygon& p : area.geom.polys) {
    ring_entry_points(p.outer, area.os_id, net_index, spacing, proximity, out);
    for (const Ring& h : p.holes) ring_entry_points(h, area.os_id, net_index, spacing, proximity, out);
  }
  return out;
}

PosResult build_open_space(const std::vector<Feature>& features, const SegmentIndex& net_index,
                           const ProjectConfig& config) {
  PosResult result;

  std::vector<OsCandidate> candidates = identify_candidates(features);

  std::vector<MultiPolygon> exclusion_parts;
  std::vector<MultiPolygon> non_public_parts;
  for (size_t i = 0; i < features.size(); ++i) {
    const Feature& f = features[i];
    if (f.kind != GeomKind::Polygon && f.kind != GeomKind::MultiPolygon) continue;
    TagMap tags = f.tags();
    bool excl = is_pos_exclusion(tags);
    bool np = is_non_public(tags);
    if (!excl && !np) continue;
    bool valid = true;
    for (const Polygon& p : f.mpoly.polys)
      if (!polygon_valid(p)) valid = false;
    if (!valid) {
      log_warn("open space: skipping degenerate exclusion feature " + std::to_string(i));
      continue;
    }
    if (excl) exclusion_parts.push_back(f.mpoly);
    if (np) non_public_parts.push_back(f.mpoly);
  }
  MultiPolygon exclusion_union = union_all(std::move(exclusion_parts));
  MultiPolygon non_public_union = union_all(std::move(non_public_parts));

  size_t before = candidates.size();
  candidates = apply_exclusions(std::move(candidates), exclusion_union);
  result.skipped_features = static_cast<int>(before - candidates.size());

  std::vector<OpenSpaceArea> merged = merge_contiguous(candidates);
  for (OpenSpaceArea& a : merged) {
    double np = public_overlap_ha(a, non_public_union);
    a.public_area_ha = std::max(0.0, a.area_ha - np);
  }

  PosFilterResult filtered = filter_and_threshold(std::move(merged), config);
  result.areas = std::move(filtered.all_pos);

  for (const OpenSpaceArea& a : result.areas) {
    auto pts = generate_entry_points(a, net_index, config.pos_entry_spacing_m,
                                     config.pos_road_proximity_m);
    for (const OsEntryPoint& e : pts) {
      result.entries_any.push_back(e);
      if (a.large) result.entries_large.push_back(e);
    }
  }
  return result;
}

}  // namespace cityind
