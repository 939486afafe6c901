#include "cityind/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cityind/clip.hpp"
#include "cityind/csv.hpp"
#include "cityind/geojson.hpp"
#include "cityind/util.hpp"

namespace cityind {

namespace fs = std::filesystem;

namespace {

std::string pt_threshold_category(double t) {
  double rounded = std::round(t);
  std::string v = (rounded == t) ? std::to_string(static_cast<long long>(rounded)) : fmt_double(t);
  return "pt_" + v + "min";
}

// Collects declared CRS labels from the region's geojson inputs; mixed
// labels are a hard error. Returns the common label (may be empty).
std::string check_crs(const RegionSpec& spec, const ProjectConfig& config,
                      std::vector<std::pair<std::string, std::string>>* found = nullptr) {
  std::vector<std::pair<std::string, std::string>> labels;
  auto probe = [&](const std::string& path) {
    if (path.empty() || !fs::exists(path)) return;
    FeatureFile f = read_geojson(path);
    if (!f.crs_label.empty()) labels.emplace_back(path, f.crs_label);
  };
  probe(spec.boundary_path);
  probe(spec.urban_layer_path);
  probe(spec.edges_path);
  probe(spec.features_path);
  probe(spec.open_space_path);
  if (!config.crs_label.empty()) labels.emplace_back("config", config.crs_label);
  std::string common;
  for (const auto& [path, label] : labels) {
    if (common.empty()) common = label;
    if (label != common)
      throw InputError("region '" + spec.name + "': mixed CRS labels ('" + common + "' vs '" +
                       label + "' in " + path + ")");
  }
  if (found) *found = labels;
  return common;
}

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

}  // namespace

AnalyzeResult analyze_region(const RunManifest& manifest, const std::string& region_name) {
  const RegionSpec& spec = manifest.region(region_name);
  const ProjectConfig& config = manifest.config;

  AnalyzeResult res;
  res.region_name = region_name;
  res.crs_label = check_crs(spec, config);

  // --- ingest ---
  res.region = prepare_study_region(spec, config);
  if (spec.edges_path.empty())
    throw InputError("region '" + region_name + "': no network edges file configured");
  FeatureFile edge_file = read_geojson(spec.edges_path);
  res.net = build_network(edge_file, spec, config);

  if (spec.population_path.empty())
    throw InputError("region '" + region_name + "': no population raster configured");
  PopulationRaster raster = load_population_raster(spec.population_path);
  res.grid = build_hex_grid(res.region, config);
  ApportionStats apstats = apportion_population(res.grid, raster, config.pop_min_threshold);
  if (apstats.dropped_cells > 0)
    log_warn(region_name + ": " + std::to_string(apstats.dropped_cells) +
             " raster cell(s) fall outside the hex grid (" + fmt_double(apstats.dropped) +
             " people dropped)");

  res.intersections = consolidate_intersections(res.net, config.intersection_tolerance_m);

  // --- destinations ---
  std::map<std::string, std::vector<Point>> dest_points;
  if (!spec.features_path.empty()) {
    FeatureFile feats = read_geojson(spec.features_path);
    for (const Feature& f : feats.features) {
      auto cats = classify(f.tags());
      if (cats.empty()) continue;
      std::string warn;
      auto pt = feature_to_point(f, &warn);
      if (!warn.empty()) log_debug(region_name + " destinations: " + warn);
      if (!pt) continue;
      for (const std::string& c : cats) dest_points[c].push_back(*pt);
    }
  }
  for (const CustomDestinationSpec& cd : spec.custom_destinations) {
    auto sets = load_custom_destinations(cd.path, cd.name_field, cd.full_name_field, cd.x_field,
                                         cd.y_field);
    for (DestinationSet& s : sets) {
      auto& bucket = dest_points[s.category];
      bucket.insert(bucket.end(), s.points.begin(), s.points.end());
    }
  }

  // --- transit ---
  res.gtfs_present = !spec.gtfs.empty();
  std::vector<Point> gtfs_any;
  std::map<double, std::vector<Point>> gtfs_sets;
  if (res.gtfs_present) {
    for (size_t i = 0; i < spec.gtfs.size(); ++i) {
      const GtfsFeedSpec& gspec = spec.gtfs[i];
      GtfsFeed feed = parse_gtfs(gspec.path);
      if (gspec.stops_xy_path.empty())
        log_warn(region_name + ": GTFS feed " + std::to_string(i + 1) +
                 " has no projected stops sidecar; applying an equirectangular approximation");
      auto hw = analyze_feed(feed, gspec, config.daytime);
      std::string prefix = spec.gtfs.size() > 1 ? "f" + std::to_string(i + 1) + ":" : "";
      for (StopHeadway& h : hw) {
        h.stop_id = prefix + h.stop_id;
        res.stop_headways.push_back(std::move(h));
      }
    }
    FrequentStopSets sets = frequent_stop_sets(res.stop_headways, config.headway_thresholds_min);
    gtfs_any = sets.any;
    gtfs_sets = std::move(sets.by_threshold);
  }

  // --- open space ---
  res.pos_measured = !spec.open_space_path.empty();
  if (res.pos_measured) {
    FeatureFile posf = read_geojson(spec.open_space_path);
    res.pos = build_open_space(posf.features, res.net.index, config);
  }

  // --- category table (order drives all outputs) ---
  res.categories = {kHealthyFood, kConvenience, kPtAny};
  res.measured = {true, true, true};
  std::vector<double> thresholds = config.headway_thresholds_min;
  std::sort(thresholds.rbegin(), thresholds.rend());  // 30 before 20, per reporting order
  for (double t : thresholds) {
    res.categories.push_back(pt_threshold_category(t));
    res.measured.push_back(res.gtfs_present);
  }
  res.categories.push_back("pos_any");
  res.measured.push_back(res.pos_measured);
  res.categories.push_back("pos_large");
  res.measured.push_back(res.pos_measured);
  std::set<std::string> canonical(res.categories.begin(), res.categories.end());
  for (const auto& [name, pts] : dest_points)
    if (!canonical.count(name)) {
      res.categories.push_back(name);
      res.measured.push_back(true);
    }

  // materialize DestinationSets in category order
  for (size_t c = 0; c < res.categories.size(); ++c) {
    DestinationSet set;
    set.category = res.categories[c];
    const std::string& name = res.categories[c];
    if (name == kPtAny) {
      auto it = dest_points.find(name);
      std::vector<Point> osm = it == dest_points.end() ? std::vector<Point>() : it->second;
      set.points = merge_pt_sources(gtfs_any, osm);
    } else if (name == "pos_any") {
      for (const OsEntryPoint& e : res.pos.entries_any) set.points.push_back(e.pos);
    } else if (name == "pos_large") {
      for (const OsEntryPoint& e : res.pos.entries_large) set.points.push_back(e.pos);
    } else if (name.rfind("pt_", 0) == 0 && name != kPtAny) {
      for (double t : thresholds)
        if (pt_threshold_category(t) == name) {
          auto it = gtfs_sets.find(t);
          if (it != gtfs_sets.end()) set.points = it->second;
        }
    } else {
      auto it = dest_points.find(name);
      if (it != dest_points.end()) set.points = it->second;
    }
    clip_to_region(set, res.region.buffered);
    if (set.dropped_outside > 0)
      log_info(region_name + ": " + set.category + ": dropped " +
               std::to_string(set.dropped_outside) + " point(s) outside the buffered region");
    res.destinations.push_back(std::move(set));
  }

  // snap destinations onto the network once
  std::vector<std::vector<SnapResult>> snapped(res.categories.size());
  for (size_t c = 0; c < res.categories.size(); ++c) {
    int unsnapped = 0;
    for (const Point& p : res.destinations[c].points) {
      auto s = snap_to_network(res.net, p, config.snap_tolerance_m);
      if (s)
        snapped[c].push_back(*s);
      else
        ++unsnapped;
    }
    if (unsnapped > 0)
      log_info(region_name + ": " + res.categories[c] + ": " + std::to_string(unsnapped) +
               " point(s) beyond snap tolerance");
  }

  // --- sample points ---
  std::vector<SamplePoint> samples = generate_sample_points(res.net, res.grid, config);
  if (samples.empty())
    throw InputError("region '" + region_name +
                     "': no sample points; no populated hex cell intersects the street network");
  res.records.assign(samples.size(), SamplePointRecord{});
  double reach_limit = std::max(config.search_limit_m, config.catchment_limit_m);
  size_t ncat = res.categories.size();
  std::vector<HexKey> intersection_cells;
  intersection_cells.reserve(res.intersections.size());
  for (const Point& p : res.intersections) intersection_cells.push_back(res.grid.containing(p));

  parallel_for(samples.size(), manifest.jobs, [&](size_t i) {
    const SamplePoint& sp = samples[i];
    SamplePointRecord rec;
    rec.id = sp.id;
    rec.edge_id = res.net.edges[sp.edge_pos].id;
    rec.offset = sp.offset;
    rec.pos = sp.pos;
    rec.hex = res.grid.containing(sp.pos);

    ReachState state = reach_from_point(res.net, sp.edge_pos, sp.offset, reach_limit);
    Catchment catchment = catchment_from_state(res.net, state, config.catchment_limit_m);
    Densities dens = catchment_densities(catchment, res.net, res.grid, intersection_cells);
    rec.pop_density = dens.pop_per_km2;
    rec.int_density = dens.intersections_per_km2;

    rec.dist.resize(ncat);
    rec.access.resize(ncat);
    for (size_t c = 0; c < ncat; ++c) {
      rec.dist[c] = res.measured[c]
                        ? nearest_destination_distance(res.net, state, snapped[c],
                                                       config.search_limit_m)
                        : std::nullopt;
      rec.access[c] = binary_access(rec.dist[c], config.access_threshold_m);
    }
    rec.daily_living = daily_living_score(rec.access[0], rec.access[1], rec.access[2]);
    res.records[i] = std::move(rec);
  });

  // --- composite scores & aggregation ---
  apply_within_city_walkability(res.records);
  res.aggs = aggregate_to_hex(res.records, res.grid, ncat);
  classify_scenarios(res.aggs, config.scenarios);
  apply_between_city_walkability({&res.aggs});
  log_info(region_name + ": between-city scores computed against this region alone");
  {
    std::map<HexKey, double> wb;
    for (const HexAggregate& a : res.aggs) wb[a.key] = a.walk_between;
    for (SamplePointRecord& r : res.records) r.walkability_between = wb[r.hex];
  }

  res.summary = city_summary(region_name, spec.income_group, res.region.area_km2, res.aggs,
                             res.categories, res.measured, config.scenarios, spec.pm25_tonnes);
  return res;
}

namespace {

void write_samples_csv(const AnalyzeResult& res, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema=" << kSamplesSchema << "\n";
  out << "sample_id,edge_id,offset_m,x,y,hex_q,hex_r,pop_density_per_km2,intersection_density_per_km2";
  for (const std::string& c : res.categories) out << ",dist_" << c << "_m,access_" << c;
  out << ",daily_living,walkability_within,walkability_between\n";
  for (const SamplePointRecord& r : res.records) {
    out << r.id << "," << r.edge_id << "," << fmt_double(r.offset) << "," << fmt_double(r.pos.x)
        << "," << fmt_double(r.pos.y) << "," << r.hex.q << "," << r.hex.r << ","
        << fmt_double(r.pop_density) << "," << fmt_double(r.int_density);
    for (size_t c = 0; c < res.categories.size(); ++c)
      out << "," << opt_cell(r.dist[c]) << "," << r.access[c];
    out << "," << r.daily_living << "," << fmt_double(r.walkability_within) << ","
        << fmt_double(r.walkability_between) << "\n";
  }
}

void write_hexes_geojson(const AnalyzeResult& res, const RunManifest& manifest,
                         const fs::path& path) {
  FeatureFile file;
  file.schema = kHexesSchema;
  file.crs_label = res.crs_label;

  std::map<HexKey, const HexAggregate*> agg_of;
  for (const HexAggregate& a : res.aggs) agg_of[a.key] = &a;

  for (const HexKey& k : res.grid.keys_sorted()) {
    const HexCellData& cell = res.grid.cell(k);
    if (!cell.populated) continue;
    Feature f;
    f.kind = GeomKind::Polygon;
    Polygon poly;
    poly.outer = res.grid.cell_polygon(k);
    f.mpoly.polys.push_back(std::move(poly));
    f.properties["region"] = res.region_name;
    f.properties["q"] = k.q;
    f.properties["r"] = k.r;
    f.properties["population"] = cell.population;
    auto it = agg_of.find(k);
    f.properties["sample_count"] = it == agg_of.end() ? 0 : it->second->sample_count;
    if (it != agg_of.end()) {
      const HexAggregate& a = *it->second;
      f.properties["pop_density_mean"] = a.pop_density_mean;
      f.properties["intersection_density_mean"] = a.int_density_mean;
      f.properties["daily_living_mean"] = a.daily_living_mean;
      f.properties["walkability_within_mean"] = a.walk_within_mean;
      f.properties["walkability_between"] = a.walk_between;
      for (size_t c = 0; c < res.categories.size(); ++c) {
        f.properties["access_mean_" + res.categories[c]] = a.access_mean[c];
        f.properties["soft_access_" + res.categories[c]] = static_cast<bool>(a.soft_access[c]);
      }
      for (size_t s = 0; s < manifest.config.scenarios.size(); ++s) {
        const ScenarioThreshold& sc = manifest.config.scenarios[s];
        f.properties["scenario_" + sc.name + "_" + sc.variable] = a.scenario_class[s];
      }
    }
    file.features.push_back(std::move(f));
  }
  write_geojson(path.string(), file);
}

void write_summary_csv(const AnalyzeResult& res, const RunManifest& manifest,
                       const fs::path& path) {
  auto out = open_out(path);
  out << "# schema=" << kSummarySchema << "\n";
  out << "region,income_group,area_km2,population,population_per_km2,sample_point_count,"
         "sample_points_per_km2";
  for (const auto& [cat, pct] : res.summary.access_percent) out << ",pct_access_" << cat;
  for (const ScenarioThreshold& sc : manifest.config.scenarios)
    out << ",pct_scenario_" << sc.name << "_" << sc.variable;
  out << ",mean_pop_density,wmean_pop_density,mean_intersection_density,"
         "wmean_intersection_density,mean_daily_living,wmean_daily_living,"
         "mean_walkability_within,wmean_walkability_within,pm25_tonnes\n";

  const CitySummary& s = res.summary;
  out << csv_escape(s.region) << "," << csv_escape(s.income_group) << ","
      << fmt_double(s.area_km2) << "," << fmt_double(s.population) << ","
      << fmt_double(s.area_km2 > 0 ? s.population / s.area_km2 : 0.0) << ","
      << s.sample_point_count << ","
      << fmt_double(s.area_km2 > 0 ? s.sample_point_count / s.area_km2 : 0.0);
  for (const auto& [cat, pct] : s.access_percent) out << "," << opt_cell(pct);
  for (double pct : s.scenario_percent) out << "," << fmt_double(pct);
  out << "," << fmt_double(s.mean_pop_density) << "," << fmt_double(s.wmean_pop_density) << ","
      << fmt_double(s.mean_int_density) << "," << fmt_double(s.wmean_int_density) << ","
      << fmt_double(s.mean_daily_living) << "," << fmt_double(s.wmean_daily_living) << ","
      << fmt_double(s.mean_walkability) << "," << fmt_double(s.wmean_walkability) << ","
      << opt_cell(s.pm25_tonnes) << "\n";
}

void write_pos_geojson(const AnalyzeResult& res, const fs::path& path) {
  FeatureFile file;
  file.schema = kPosSchema;
  file.crs_label = res.crs_label;
  for (const OpenSpaceArea& a : res.pos.areas) {
    Feature f;
    f.kind = a.geom.polys.size() == 1 ? GeomKind::Polygon : GeomKind::MultiPolygon;
    f.mpoly = a.geom;
    f.properties["kind"] = "area";
    f.properties["os_id"] = a.os_id;
    f.properties["area_ha"] = a.area_ha;
    f.properties["public_area_ha"] = a.public_area_ha;
    f.properties["min_bounding_circle_area_m2"] = a.mbc_area_m2;
    f.properties["roundness"] = a.roundness;
    f.properties["linear_feature"] = a.linear_feature;
    f.properties["water"] = a.water;
    f.properties["large"] = a.large;
    file.features.push_back(std::move(f));
  }
  for (const OsEntryPoint& e : res.pos.entries_any) {
    Feature f;
    f.kind = GeomKind::Point;
    f.point = e.pos;
    f.properties["kind"] = "entry";
    f.properties["os_id"] = e.os_id;
    file.features.push_back(std::move(f));
  }
  write_geojson(path.string(), file);
}

void write_stops_csv(const AnalyzeResult& res, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema=" << kStopsSchema << "\n";
  out << "stop_id,x,y,avg_daily_departures,headway_min\n";
  for (const StopHeadway& h : res.stop_headways) {
    out << csv_escape(h.stop_id) << "," << fmt_double(h.pos.x) << "," << fmt_double(h.pos.y) << ","
        << fmt_double(h.avg_daily_departures) << ","
        << (std::isfinite(h.headway_min) ? fmt_double(h.headway_min) : std::string()) << "\n";
  }
}

}  // namespace

std::vector<std::string> cmd_analyze(const RunManifest& manifest, const std::string& region_name) {
  AnalyzeResult res = analyze_region(manifest, region_name);
  fs::path dir = fs::path(manifest.out_dir) / region_name;
  std::vector<std::string> written;

  write_samples_csv(res, dir / "samples.csv");
  written.push_back((dir / "samples.csv").string());
  write_hexes_geojson(res, manifest, dir / "hexes.geojson");
  written.push_back((dir / "hexes.geojson").string());
  write_summary_csv(res, manifest, dir / "summary.csv");
  written.push_back((dir / "summary.csv").string());
  if (res.pos_measured) {
    write_pos_geojson(res, dir / "pos.geojson");
    written.push_back((dir / "pos.geojson").string());
  }
  if (res.gtfs_present) {
    write_stops_csv(res, dir / "stops_headways.csv");
    written.push_back((dir / "stops_headways.csv").string());
  }
  return written;
}

int cmd_validate(const RunManifest& manifest, std::ostream& out) {
  int fatal = 0, warnings = 0;
  for (const RegionSpec& spec : manifest.regions) {
    out << "region " << spec.name << "\n";
    auto fail = [&](const std::string& msg) {
      out << "  [fatal] " << msg << "\n";
      ++fatal;
    };
    auto warn = [&](const std::string& msg) {
      out << "  [warn] " << msg << "\n";
      ++warnings;
    };
    auto note = [&](const std::string& msg) { out << "  [ok] " << msg << "\n"; };

    try {
      check_crs(spec, manifest.config);
      note("CRS labels consistent");
    } catch (const InputError& e) {
      fail(e.what());
    }

    auto check_file = [&](const std::string& path, const std::string& what, bool required) {
      if (path.empty()) {
        if (required)
          fail(what + ": not configured");
        else
          warn(what + ": not configured");
        return false;
      }
      if (!fs::exists(path)) {
        fail(what + ": missing file " + path);
        return false;
      }
      return true;
    };

    if (check_file(spec.boundary_path, "boundary", true)) {
      try {
        StudyRegion r = prepare_study_region(spec, manifest.config);
        note("study region: " + fmt_double(r.area_km2) + " km2");
      } catch (const std::exception& e) {
        fail(std::string("study region: ") + e.what());
      }
    }
    if (check_file(spec.edges_path, "network edges", true)) {
      try {
        FeatureFile f = read_geojson(spec.edges_path);
        int lines = 0;
        for (const Feature& feat : f.features)
          if (feat.kind == GeomKind::LineString) ++lines;
        if (lines == 0)
          fail("network edges: no LineString features");
        else
          note("network edges: " + std::to_string(lines) + " features");
      } catch (const std::exception& e) {
        fail(std::string("network edges: ") + e.what());
      }
    }
    if (check_file(spec.population_path, "population raster", true)) {
      try {
        PopulationRaster r = load_population_raster(spec.population_path);
        note("population: " + std::to_string(r.cells.size()) + " cells, total " +
             fmt_double(r.total()));
      } catch (const std::exception& e) {
        fail(std::string("population: ") + e.what());
      }
    }

    // Destination audit: counts per category, zero-count warnings.
    if (check_file(spec.features_path, "destination features", false)) {
      try {
        FeatureFile f = read_geojson(spec.features_path);
        std::map<std::string, int> counts = {
            {kHealthyFood, 0}, {kConvenience, 0}, {kPtAny, 0}};
        for (const Feature& feat : f.features)
          for (const std::string& c : classify(feat.tags())) counts[c] += 1;
        for (const auto& [cat, n] : counts) {
          if (n == 0)
            warn("no features classified as " + cat);
          else
            note(cat + ": " + std::to_string(n) + " features");
        }
      } catch (const std::exception& e) {
        fail(std::string("destination features: ") + e.what());
      }
    }
    if (check_file(spec.open_space_path, "open space features", false)) {
      try {
        FeatureFile f = read_geojson(spec.open_space_path);
        int cand = 0;
        for (const Feature& feat : f.features)
          if ((feat.kind == GeomKind::Polygon || feat.kind == GeomKind::MultiPolygon) &&
              is_pos_candidate(feat.tags()))
            ++cand;
        if (cand == 0)
          warn("no open-space candidates");
        else
          note("open space: " + std::to_string(cand) + " candidates");
      } catch (const std::exception& e) {
        fail(std::string("open space: ") + e.what());
      }
    }
    if (spec.gtfs.empty()) {
      warn("no GTFS feeds configured; service-frequency indicators will be absent");
    } else {
      for (size_t i = 0; i < spec.gtfs.size(); ++i) {
        try {
          GtfsFeed feed = parse_gtfs(spec.gtfs[i].path);
          note("gtfs feed " + std::to_string(i + 1) + ": " + std::to_string(feed.stops.size()) +
               " stops, " + std::to_string(feed.stop_times.size()) + " stop_times");
        } catch (const std::exception& e) {
          fail("gtfs feed " + std::to_string(i + 1) + ": " + e.what());
        }
      }
    }
    for (const CustomDestinationSpec& cd : spec.custom_destinations) {
      try {
        auto sets = load_custom_destinations(cd.path, cd.name_field, cd.full_name_field,
                                             cd.x_field, cd.y_field);
        note("custom destinations: " + std::to_string(sets.size()) + " categories from " + cd.path);
      } catch (const std::exception& e) {
        fail(std::string("custom destinations: ") + e.what());
      }
    }
  }
  out << (fatal ? "FAIL" : "OK") << ": " << fatal << " fatal, " << warnings << " warning(s)\n";
  return fatal ? 1 : 0;
}

namespace {

struct CompareRegion {
  std::string name;
  std::string income_group;
  std::vector<HexAggregate> aggs;
  std::vector<Feature> features;  // original hex features, re-emitted with new scores
};

}  // namespace

std::vector<std::string> cmd_compare(const RunManifest& manifest) {
  std::vector<CompareRegion> regions;
  std::string crs;
  for (const RegionSpec& spec : manifest.regions) {
    fs::path hex_path = fs::path(manifest.out_dir) / spec.name / "hexes.geojson";
    if (!fs::exists(hex_path)) continue;
    FeatureFile f = read_geojson(hex_path.string());
    if (crs.empty()) crs = f.crs_label;
    CompareRegion cr;
    cr.name = spec.name;
    cr.income_group = spec.income_group;
    for (Feature& feat : f.features) {
      if (!feat.properties.contains("pop_density_mean")) continue;  // no sample points
      HexAggregate a;
      a.key = {feat.properties.value("q", 0), feat.properties.value("r", 0)};
      a.population = feat.properties.value("population", 0.0);
      a.sample_count = feat.properties.value("sample_count", 0);
      a.pop_density_mean = feat.properties.value("pop_density_mean", 0.0);
      a.int_density_mean = feat.properties.value("intersection_density_mean", 0.0);
      a.daily_living_mean = feat.properties.value("daily_living_mean", 0.0);
      a.walk_within_mean = feat.properties.value("walkability_within_mean", 0.0);
      cr.aggs.push_back(std::move(a));
      cr.features.push_back(std::move(feat));
    }
    regions.push_back(std::move(cr));
  }
  if (regions.empty())
    throw InputError("compare: no analyzed regions found under " + manifest.out_dir +
                     " (run analyze first)");
  if (regions.size() == 1)
    log_warn("compare: single region; between-city scores are relative to itself");

  std::vector<std::vector<HexAggregate>*> pool;
  for (CompareRegion& r : regions) pool.push_back(&r.aggs);
  apply_between_city_walkability(pool);

  FeatureFile out_hexes;
  out_hexes.schema = kCompareHexesSchema;
  out_hexes.crs_label = crs;
  for (CompareRegion& r : regions) {
    for (size_t i = 0; i < r.aggs.size(); ++i) {
      Feature f = r.features[i];
      f.properties["region"] = r.name;
      f.properties["z_pop_density_between"] = r.aggs[i].z_pop_between;
      f.properties["z_intersection_density_between"] = r.aggs[i].z_int_between;
      f.properties["z_daily_living_between"] = r.aggs[i].z_dl_between;
      f.properties["walkability_between"] = r.aggs[i].walk_between;
      out_hexes.features.push_back(std::move(f));
    }
  }
  fs::path hex_out = fs::path(manifest.out_dir) / "compare_hexes.geojson";
  write_geojson(hex_out.string(), out_hexes);

  fs::path sum_out = fs::path(manifest.out_dir) / "compare_summary.csv";
  {
    auto out = open_out(sum_out);
    out << "# schema=" << kCompareSummarySchema << "\n";
    out << "region,income_group,hex_count,population,mean_pop_density,"
           "mean_intersection_density,mean_daily_living,mean_z_pop_density,"
           "mean_z_intersection_density,mean_z_daily_living,mean_walkability_between,"
           "wmean_walkability_between\n";
    for (const CompareRegion& r : regions) {
      double n = static_cast<double>(r.aggs.size());
      double pop = 0.0, mpd = 0.0, mid = 0.0, mdl = 0.0;
      double mzp = 0.0, mzi = 0.0, mzd = 0.0, mwb = 0.0, wwb = 0.0;
      for (const HexAggregate& a : r.aggs) {
        pop += a.population;
        mpd += a.pop_density_mean / n;
        mid += a.int_density_mean / n;
        mdl += a.daily_living_mean / n;
        mzp += a.z_pop_between / n;
        mzi += a.z_int_between / n;
        mzd += a.z_dl_between / n;
        mwb += a.walk_between / n;
      }
      if (pop > 0.0)
        for (const HexAggregate& a : r.aggs) wwb += a.population * a.walk_between / pop;
      out << csv_escape(r.name) << "," << csv_escape(r.income_group) << "," << r.aggs.size()
          << "," << fmt_double(pop) << "," << fmt_double(mpd) << "," << fmt_double(mid) << ","
          << fmt_double(mdl) << "," << fmt_double(mzp) << "," << fmt_double(mzi) << ","
          << fmt_double(mzd) << "," << fmt_double(mwb) << "," << fmt_double(wwb) << "\n";
    }
  }
  return {hex_out.string(), sum_out.string()};
}

std::vector<std::string> cmd_gtfs_headways(const RunManifest& manifest,
                                           const std::string& region_name) {
  const RegionSpec& spec = manifest.region(region_name);
  if (spec.gtfs.empty())
    throw InputError("region '" + region_name + "': no GTFS feeds configured");
  AnalyzeResult res;
  res.region_name = region_name;
  for (size_t i = 0; i < spec.gtfs.size(); ++i) {
    const GtfsFeedSpec& gspec = spec.gtfs[i];
    GtfsFeed feed = parse_gtfs(gspec.path);
    auto hw = analyze_feed(feed, gspec, manifest.config.daytime);
    std::string prefix = spec.gtfs.size() > 1 ? "f" + std::to_string(i + 1) + ":" : "";
    for (StopHeadway& h : hw) {
      h.stop_id = prefix + h.stop_id;
      res.stop_headways.push_back(std::move(h));
    }
  }
  fs::path path = fs::path(manifest.out_dir) / region_name / "stops_headways.csv";
  write_stops_csv(res, path);
  return {path.string()};
}

}  // namespace cityind
