#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/destinations.hpp"
#include "cityind/hexgrid.hpp"
#include "cityind/indicators.hpp"
#include "cityind/network.hpp"
#include "cityind/open_space.hpp"
#include "cityind/region.hpp"
#include "cityind/transit.hpp"

namespace cityind {

inline constexpr const char* kSamplesSchema = "cityind.samples.v1";
inline constexpr const char* kHexesSchema = "cityind.hexes.v1";
inline constexpr const char* kSummarySchema = "cityind.summary.v1";
inline constexpr const char* kPosSchema = "cityind.pos.v1";
inline constexpr const char* kStopsSchema = "cityind.stops.v1";
inline constexpr const char* kCompareHexesSchema = "cityind.compare_hexes.v1";
inline constexpr const char* kCompareSummarySchema = "cityind.compare_summary.v1";

struct AnalyzeResult {
  std::string region_name;
  std::string crs_label;
  StudyRegion region;
  StreetNetwork net;
  HexGrid grid;
  std::vector<Point> intersections;
  std::vector<std::string> categories;  // ordered, drives samples.csv columns
  std::vector<bool> measured;           // per category
  std::vector<DestinationSet> destinations;  // per category, same order
  PosResult pos;
  bool pos_measured = false;
  std::vector<StopHeadway> stop_headways;  // namespaced across feeds
  bool gtfs_present = false;
  std::vector<SamplePointRecord> records;
  std::vector<HexAggregate> aggs;
  CitySummary summary;
};

// Full per-region pipeline; manifest.jobs bounds worker threads for the
// per-sample-point stage (results are identical for any value).
AnalyzeResult analyze_region(const RunManifest& manifest, const std::string& region_name);

// validate: prints per-region audit findings; returns the process exit code
// (0 = clean, 1 = fatal findings).
int cmd_validate(const RunManifest& manifest, std::ostream& out);

// analyze + write samples.csv, hexes.geojson, summary.csv, and (when
// measured) pos.geojson / stops_headways.csv under <out_dir>/<region>/;
// returns written paths.
std::vector<std::string> cmd_analyze(const RunManifest& manifest, const std::string& region_name);

// Pools analyzed hex layers, recomputes between-city z-scores, writes
// compare_hexes.geojson and compare_summary.csv into out_dir.
std::vector<std::string> cmd_compare(const RunManifest& manifest);

// Standalone transit run: writes stops_headways.csv for one region.
std::vector<std::string> cmd_gtfs_headways(const RunManifest& manifest,
                                           const std::string& region_name);

}  // namespace cityind
