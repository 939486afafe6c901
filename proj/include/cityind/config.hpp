#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cityind/util.hpp"

namespace cityind {

struct ScenarioThreshold {
  std::string name;      // "A" or "B"
  std::string variable;  // population_density | intersection_density
  double lower = 0.0;    // per km^2
  double upper = 0.0;
};

// Minutes since midnight, half-open [start, end).
struct ClockWindow {
  int start_min = 7 * 60;
  int end_min = 19 * 60;
  int minutes() const { return end_min - start_min; }
};

struct ProjectConfig {
  std::string crs_label;  // opaque identity check across inputs
  double study_buffer_m = 1600.0;
  double hex_diag_m = 250.0;
  double sample_interval_m = 30.0;
  double catchment_limit_m = 1000.0;
  double access_threshold_m = 500.0;
  double search_limit_m = 1600.0;
  double snap_tolerance_m = 500.0;
  double intersection_tolerance_m = 12.0;
  double pos_entry_spacing_m = 20.0;
  double pos_road_proximity_m = 30.0;
  double pos_min_area_m2 = 10.0;
  double pos_large_area_ha = 1.5;
  double pop_min_threshold = 5.0;
  std::vector<double> headway_thresholds_min = {20.0, 30.0};
  ClockWindow daytime;
  std::vector<ScenarioThreshold> scenarios;  // defaults below

  static std::vector<ScenarioThreshold> default_scenarios();
  static ProjectConfig from_json(const nlohmann::json& doc);
  static ProjectConfig load(const std::string& path);
  void check() const;  // throws InputError naming the offending key
};

struct CustomDestinationSpec {
  std::string path;
  std::string name_field = "dest_name";
  std::string full_name_field = "dest_name_full";
  std::string x_field = "x";
  std::string y_field = "y";
};

struct GtfsFeedSpec {
  std::string path;  // directory or .zip
  int start_date = 0;
  int end_date = 0;
  std::string stops_xy_path;  // optional sidecar: stop_id,x,y (projected)
  std::vector<std::string> route_include;
  std::vector<std::string> route_exclude;
};

struct RegionSpec {
  std::string name;
  std::string boundary_path;
  std::string urban_layer_path;  // optional
  bool not_urban_intersection = false;
  bool retain_all_components = false;
  std::optional<double> component_connect_threshold_m;
  std::string edges_path;
  std::string features_path;     // tagged destination features
  std::string open_space_path;   // tagged open-space polygons (may be empty)
  std::string population_path;
  std::vector<GtfsFeedSpec> gtfs;
  std::vector<CustomDestinationSpec> custom_destinations;
  std::optional<double> pm25_tonnes;  // passthrough only
  std::string income_group;           // optional metadata
};

struct RunManifest {
  ProjectConfig config;
  std::string out_dir = "out";
  int jobs = 1;
  LogLevel log_level = LogLevel::Warn;
  std::vector<RegionSpec> regions;

  static RunManifest load(const std::string& path);
  const RegionSpec& region(const std::string& name) const;
};

}  // namespace cityind
