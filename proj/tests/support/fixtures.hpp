#pragma once

#include <string>
#include <vector>

#include "support/oracles.hpp"

namespace fixtures {

// Fresh scratch directory under the build tree's temp area.
std::string make_temp_dir(const std::string& name);

// Gridtown: 21x21 street grid at 100 m spacing inside a [0,2000]^2 region,
// uniform population raster, three planted destination sets, one park
// with a private building inside, one synthetic GTFS feed. Returns the
// manifest path.
std::string write_gridtown(const std::string& dir);

// Everything the independent pipeline needs to recompute gridtown.
struct GridtownSpec {
  int n = 21;                 // nodes per side
  double spacing = 100.0;     // metres
  double extent = 2000.0;     // boundary square side
  double raster_cell = 250.0;
  double raster_pop = 100.0;  // per cell
  std::vector<oracle::Pt> healthy_food;
  std::vector<oracle::Pt> convenience;
  std::vector<oracle::Pt> osm_pt;
  std::vector<oracle::Pt> gtfs_stops;          // A, B, C projected
  std::vector<double> gtfs_headways_min;       // per stop
  std::vector<double> gtfs_avg_daily;          // per stop
  // park rectangle [x0,x1]x[y0,y1] and the private building inside
  double park[4] = {900, 1100, 1200, 1400};
  double building[4] = {950, 1000, 1250, 1300};
};
GridtownSpec gridtown_spec();

// Toyville: small 3x3 grid town exercising every input kind (custom
// destinations, polygon destination, park, optional GTFS).
std::string write_toyville(const std::string& dir, bool with_gtfs);

// Minimal zip archive with stored (uncompressed) entries.
void write_stored_zip(const std::string& zip_path,
                      const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace fixtures
