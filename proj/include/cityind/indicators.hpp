#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/geom.hpp"
#include "cityind/hexgrid.hpp"
#include "cityind/network.hpp"

namespace cityind {

// 1 iff the distance is present and within the threshold (inclusive).
int binary_access(const std::optional<double>& distance_m, double threshold_m);

// Equal-weighted sum of the three named binaries.
int daily_living_score(int food, int convenience, int pt_any);

// z_i = (v_i - mean) / sd with population sd; constant series yields zeros.
std::vector<double> zscore_series(const std::vector<double>& values);

struct Densities {
  double pop_per_km2 = 0.0;
  double intersections_per_km2 = 0.0;
  std::vector<HexKey> cellset;  // sorted
};

// Cells touched by any reached interval; densities over the cellset's
// whole-cell area. Intersection membership resolves each point to its
// containing hex. Empty reach yields zero densities.
Densities catchment_densities(const Catchment& catchment, const StreetNetwork& net,
                              const HexGrid& grid, const std::vector<Point>& intersections);

// Same, with the intersections' containing cells precomputed (they are
// fixed per region while catchments vary per sample point).
Densities catchment_densities(const Catchment& catchment, const StreetNetwork& net,
                              const HexGrid& grid,
                              const std::vector<HexKey>& intersection_cells);

struct SamplePointRecord {
  int id = -1;
  int edge_id = -1;  // external edge id
  double offset = 0.0;
  Point pos;
  HexKey hex;
  double pop_density = 0.0;
  double int_density = 0.0;
  std::vector<std::optional<double>> dist;  // per category
  std::vector<int> access;                  // per category
  int daily_living = 0;
  double walkability_within = 0.0;
  double walkability_between = 0.0;  // hex-level value echoed back
};

// Adds z(pop) + z(int) + z(daily_living) over this region's sample points.
void apply_within_city_walkability(std::vector<SamplePointRecord>& records);

struct HexAggregate {
  HexKey key;
  Point center;
  double population = 0.0;
  int sample_count = 0;
  double pop_density_mean = 0.0;
  double int_density_mean = 0.0;
  double daily_living_mean = 0.0;
  double walk_within_mean = 0.0;
  std::vector<double> access_mean;  // per category
  std::vector<bool> soft_access;    // mean >= 0.5
  double walk_between = 0.0;
  double z_pop_between = 0.0;
  double z_int_between = 0.0;
  double z_dl_between = 0.0;
  std::vector<std::string> scenario_class;  // parallel to config.scenarios
};

// Arithmetic means per containing hex; only hexes with sample points
// appear. Sorted by key.
std::vector<HexAggregate> aggregate_to_hex(const std::vector<SamplePointRecord>& records,
                                           const HexGrid& grid, size_t n_categories);

// Population-weighted percent with soft access, over hexes with values.
// Throws when their total population is zero.
double population_percent_with_access(const std::vector<HexAggregate>& aggs,
                                      size_t category_index);

struct ScenarioExposure {
  double percent_meeting = 0.0;  // population-weighted share, class within|exceeds
  std::vector<std::string> hex_class;  // parallel to aggs
};

ScenarioExposure scenario_exposure(const std::vector<HexAggregate>& aggs,
                                   const ScenarioThreshold& scenario);

// Classifies all configured scenarios into agg.scenario_class.
void classify_scenarios(std::vector<HexAggregate>& aggs,
                        const std::vector<ScenarioThreshold>& scenarios);

// Pooled hex-level z-scores across regions, written into walk_between.
// With a single region the scores are relative to itself (callers flag it).
void apply_between_city_walkability(std::vector<std::vector<HexAggregate>*> region_aggs);

struct CitySummary {
  std::string region;
  std::string income_group;
  double area_km2 = 0.0;
  double population = 0.0;
  int sample_point_count = 0;
  // category key -> population-weighted percent (absent = not measured)
  std::vector<std::pair<std::string, std::optional<double>>> access_percent;
  // one per configured scenario, in config order
  std::vector<double> scenario_percent;
  double mean_pop_density = 0.0, wmean_pop_density = 0.0;
  double mean_int_density = 0.0, wmean_int_density = 0.0;
  double mean_daily_living = 0.0, wmean_daily_living = 0.0;
  double mean_walkability = 0.0, wmean_walkability = 0.0;
  std::optional<double> pm25_tonnes;  // passthrough, never computed
};

// `measured[i]` marks categories actually evaluated for this region;
// unmeasured ones get an absent percent (e.g. service-frequency sets
// without any GTFS feed).
CitySummary city_summary(const std::string& region_name, const std::string& income_group,
                         double area_km2, const std::vector<HexAggregate>& aggs,
                         const std::vector<std::string>& categories,
                         const std::vector<bool>& measured,
                         const std::vector<ScenarioThreshold>& scenarios,
                         std::optional<double> pm25);

}  // namespace cityind
