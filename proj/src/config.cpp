#include "cityind/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace cityind {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<ScenarioThreshold> ProjectConfig::default_scenarios() {
  return {
      {"A", "population_density", 4790.0, 6750.0},
      {"B", "population_density", 5677.0, 7823.0},
      {"A", "intersection_density", 90.0, 110.0},
      {"B", "intersection_density", 106.0, 156.0},
  };
}

namespace {

int parse_clock(const std::string& hhmm, const std::string& key) {
  size_t colon = hhmm.find(':');
  if (colon == std::string::npos) throw InputError(key + ": expected HH:MM, got '" + hhmm + "'");
  int h = static_cast<int>(parse_int_strict(hhmm.substr(0, colon), key));
  int m = static_cast<int>(parse_int_strict(hhmm.substr(colon + 1), key));
  if (h < 0 || h > 24 || m < 0 || m > 59) throw InputError(key + ": clock value out of range");
  return h * 60 + m;
}

double get_positive(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) throw InputError(std::string(key) + ": must be a number");
  return doc.at(key).get<double>();
}

}  // namespace

ProjectConfig ProjectConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("config: top level must be a JSON object");

  static const std::set<std::string> known = {
      "crs_label", "study_buffer_m", "hex_diag_m", "sample_interval_m",
      "catchment_limit_m", "access_threshold_m", "search_limit_m", "snap_tolerance_m",
      "intersection_tolerance_m", "pos_entry_spacing_m", "pos_road_proximity_m",
      "pos_min_area_m2", "pos_large_area_ha", "pop_min_threshold",
      "headway_thresholds_min", "daytime_start", "daytime_end", "scenarios"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key())) throw InputError("config: unknown key '" + it.key() + "'");

  ProjectConfig c;
  if (doc.contains("crs_label")) c.crs_label = doc.at("crs_label").get<std::string>();
  c.study_buffer_m = get_positive(doc, "study_buffer_m", c.study_buffer_m);
  c.hex_diag_m = get_positive(doc, "hex_diag_m", c.hex_diag_m);
  c.sample_interval_m = get_positive(doc, "sample_interval_m", c.sample_interval_m);
  c.catchment_limit_m = get_positive(doc, "catchment_limit_m", c.catchment_limit_m);
  c.access_threshold_m = get_positive(doc, "access_threshold_m", c.access_threshold_m);
  c.search_limit_m = get_positive(doc, "search_limit_m", c.search_limit_m);
  c.snap_tolerance_m = get_positive(doc, "snap_tolerance_m", c.snap_tolerance_m);
  c.intersection_tolerance_m = get_positive(doc, "intersection_tolerance_m", c.intersection_tolerance_m);
  c.pos_entry_spacing_m = get_positive(doc, "pos_entry_spacing_m", c.pos_entry_spacing_m);
  c.pos_road_proximity_m = get_positive(doc, "pos_road_proximity_m", c.pos_road_proximity_m);
  c.pos_min_area_m2 = get_positive(doc, "pos_min_area_m2", c.pos_min_area_m2);
  c.pos_large_area_ha = get_positive(doc, "pos_large_area_ha", c.pos_large_area_ha);
  c.pop_min_threshold = get_positive(doc, "pop_min_threshold", c.pop_min_threshold);

  if (doc.contains("headway_thresholds_min")) {
    c.headway_thresholds_min.clear();
    for (const auto& v : doc.at("headway_thresholds_min")) {
      if (!v.is_number()) throw InputError("headway_thresholds_min: entries must be numbers");
      c.headway_thresholds_min.push_back(v.get<double>());
    }
  }
  if (doc.contains("daytime_start"))
    c.daytime.start_min = parse_clock(doc.at("daytime_start").get<std::string>(), "daytime_start");
  if (doc.contains("daytime_end"))
    c.daytime.end_min = parse_clock(doc.at("daytime_end").get<std::string>(), "daytime_end");

  c.scenarios = default_scenarios();
  if (doc.contains("scenarios")) {
    c.scenarios.clear();
    for (const auto& js : doc.at("scenarios")) {
      ScenarioThreshold s;
      s.name = js.at("name").get<std::string>();
      s.variable = js.at("variable").get<std::string>();
      s.lower = js.at("lower").get<double>();
      s.upper = js.at("upper").get<double>();
      if (s.variable != "population_density" && s.variable != "intersection_density")
        throw InputError("scenarios: unknown variable '" + s.variable + "'");
      c.scenarios.push_back(s);
    }
  }

  c.check();
  return c;
}

void ProjectConfig::check() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw InputError(std::string("config: ") + key + " must be positive");
  };
  positive(study_buffer_m, "study_buffer_m");
  positive(hex_diag_m, "hex_diag_m");
  positive(sample_interval_m, "sample_interval_m");
  positive(catchment_limit_m, "catchment_limit_m");
  positive(access_threshold_m, "access_threshold_m");
  positive(search_limit_m, "search_limit_m");
  positive(snap_tolerance_m, "snap_tolerance_m");
  positive(intersection_tolerance_m, "intersection_tolerance_m");
  positive(pos_entry_spacing_m, "pos_entry_spacing_m");
  positive(pos_road_proximity_m, "pos_road_proximity_m");
  positive(pos_min_area_m2, "pos_min_area_m2");
  positive(pos_large_area_ha, "pos_large_area_ha");
  if (pop_min_threshold < 0.0) throw InputError("config: pop_min_threshold must be >= 0");
  if (access_threshold_m > search_limit_m)
    throw InputError("config: access_threshold_m exceeds search_limit_m");
  if (catchment_limit_m > search_limit_m)
    throw InputError("config: catchment_limit_m exceeds search_limit_m");
  if (daytime.start_min >= daytime.end_min)
    throw InputError("config: daytime window start must precede end");
  for (double t : headway_thresholds_min)
    if (!(t > 0.0)) throw InputError("config: headway_thresholds_min entries must be positive");
  for (const auto& s : scenarios)
    if (!(s.lower < s.upper))
      throw InputError("config: scenario '" + s.name + "/" + s.variable + "' lower must be < upper");
}

ProjectConfig ProjectConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw InputError("config " + path + ": " + e.what());
  }
  return from_json(doc);
}

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path fp(p);
  if (fp.is_absolute()) return fp.string();
  return (base / fp).lexically_normal().string();
}

RegionSpec parse_region(const json& jr, const fs::path& base) {
  RegionSpec r;
  if (!jr.contains("name")) throw InputError("manifest: region without a name");
  r.name = jr.at("name").get<std::string>();
  auto ctx = "manifest region '" + r.name + "'";
  if (!jr.contains("boundary")) throw InputError(ctx + ": missing boundary");
  r.boundary_path = resolve(base, jr.at("boundary").get<std::string>());
  if (jr.contains("urban_layer")) r.urban_layer_path = resolve(base, jr.at("urban_layer").get<std::string>());
  r.not_urban_intersection = jr.value("not_urban_intersection", false);
  r.retain_all_components = jr.value("retain_all_components", false);
  if (jr.contains("component_connect_threshold_m") && !jr.at("component_connect_threshold_m").is_null())
    r.component_connect_threshold_m = jr.at("component_connect_threshold_m").get<double>();
  if (jr.contains("edges")) r.edges_path = resolve(base, jr.at("edges").get<std::string>());
  if (jr.contains("features")) r.features_path = resolve(base, jr.at("features").get<std::string>());
  if (jr.contains("open_space")) r.open_space_path = resolve(base, jr.at("open_space").get<std::string>());
  if (jr.contains("population")) r.population_path = resolve(base, jr.at("population").get<std::string>());
  if (jr.contains("pm25_tonnes") && !jr.at("pm25_tonnes").is_null())
    r.pm25_tonnes = jr.at("pm25_tonnes").get<double>();
  r.income_group = jr.value("income_group", "");

  if (jr.contains("gtfs")) {
    for (const auto& jg : jr.at("gtfs")) {
      GtfsFeedSpec g;
      g.path = resolve(base, jg.at("path").get<std::string>());
      g.start_date = static_cast<int>(parse_int_strict(jg.at("start_date").is_string()
                                                           ? jg.at("start_date").get<std::string>()
                                                           : std::to_string(jg.at("start_date").get<long long>()),
                                                       ctx + " gtfs start_date"));
      g.end_date = static_cast<int>(parse_int_strict(jg.at("end_date").is_string()
                                                         ? jg.at("end_date").get<std::string>()
                                                         : std::to_string(jg.at("end_date").get<long long>()),
                                                     ctx + " gtfs end_date"));
      if (!valid_date(g.start_date) || !valid_date(g.end_date) || g.start_date > g.end_date)
        throw InputError(ctx + ": invalid GTFS analysis window");
      if (jg.contains("stops_xy")) g.stops_xy_path = resolve(base, jg.at("stops_xy").get<std::string>());
      if (jg.contains("route_include"))
        for (const auto& v : jg.at("route_include")) g.route_include.push_back(v.get<std::string>());
      if (jg.contains("route_exclude"))
        for (const auto& v : jg.at("route_exclude")) g.route_exclude.push_back(v.get<std::string>());
      r.gtfs.push_back(std::move(g));
    }
  }
  if (jr.contains("custom_destinations")) {
    for (const auto& jc : jr.at("custom_destinations")) {
      CustomDestinationSpec c;
      c.path = resolve(base, jc.at("path").get<std::string>());
      c.name_field = jc.value("name_field", c.name_field);
      c.full_name_field = jc.value("full_name_field", c.full_name_field);
      c.x_field = jc.value("x_field", c.x_field);
      c.y_field = jc.value("y_field", c.y_field);
      r.custom_destinations.push_back(std::move(c));
    }
  }
  return r;
}

}  // namespace

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw InputError("manifest " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("manifest: top level must be an object");

  fs::path base = fs::path(path).parent_path();
  RunManifest m;
  if (doc.contains("config")) {
    const auto& jc = doc.at("config");
    if (jc.is_string())
      m.config = ProjectConfig::load(resolve(base, jc.get<std::string>()));
    else
      m.config = ProjectConfig::from_json(jc);
  }
  if (doc.contains("out_dir")) m.out_dir = resolve(base, doc.at("out_dir").get<std::string>());
  if (doc.contains("jobs")) m.jobs = doc.at("jobs").get<int>();
  if (doc.contains("log_level")) {
    auto level = parse_log_level(doc.at("log_level").get<std::string>());
    if (!level) throw InputError("manifest: unknown log_level");
    m.log_level = *level;
  }
  if (!doc.contains("regions") || !doc.at("regions").is_array() || doc.at("regions").empty())
    throw InputError("manifest: needs a non-empty regions array");
  std::set<std::string> names;
  for (const auto& jr : doc.at("regions")) {
    RegionSpec r = parse_region(jr, base);
    if (!names.insert(r.name).second)
      throw InputError("manifest: duplicate region name '" + r.name + "'");
    m.regions.push_back(std::move(r));
  }
  return m;
}

const RegionSpec& RunManifest::region(const std::string& name) const {
  for (const auto& r : regions)
    if (r.name == name) return r;
  throw InputError("manifest: no region named '" + name + "'");
}

}  // namespace cityind
