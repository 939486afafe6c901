#pragma once

// Brute-force re-implementation of the whole gridtown pipeline, sharing
// only the fixture constants with the production code path. Selection
// Dijkstra, exhaustive snapping, naive hex scans, direct formulas.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace gridtown_oracle {

struct Record {
  int edge_id = -1;
  double offset = 0.0;
  oracle::Pt pos;
  int hex_q = 0, hex_r = 0;
  double pop_density = 0.0;
  double int_density = 0.0;
  std::vector<std::optional<double>> dist;   // per category
  std::vector<int> access;
  int daily_living = 0;
  double walk_within = 0.0;
  double walk_between = 0.0;
};

struct Summary {
  double area_km2 = 0.0;
  double population = 0.0;
  int sample_count = 0;
  std::vector<std::optional<double>> access_percent;  // per category
  std::vector<double> scenario_percent;               // 4 default scenarios
  double mean_pop_density = 0.0, wmean_pop_density = 0.0;
  double mean_int_density = 0.0, wmean_int_density = 0.0;
  double mean_daily_living = 0.0, wmean_daily_living = 0.0;
  double mean_walkability = 0.0, wmean_walkability = 0.0;
};

struct Result {
  std::vector<std::string> categories;  // column order expected in samples.csv
  std::vector<Record> records;
  Summary summary;
  std::string guard_failure;  // non-empty if a fixture sanity guard tripped
};

Result run(const fixtures::GridtownSpec& spec);

}  // namespace gridtown_oracle
