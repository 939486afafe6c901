#pragma once

#include <string>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/geom.hpp"
#include "cityind/geojson.hpp"

namespace cityind {

struct StudyRegion {
  std::string name;
  MultiPolygon urban;     // analysis polygon
  MultiPolygon buffered;  // urban buffered outward by study_buffer_m
  double area_km2 = 0.0;  // of the urban polygon
};

// Union of the inputs; with delete_holes all interior rings are removed.
// Inputs failing validity (self-intersection) are rejected.
MultiPolygon dissolve_boundary(const std::vector<Polygon>& polygons, bool delete_holes);

// Geometry core, file-free (urban == nullptr or not_urban_intersection
// skips the urban-centre intersection).
StudyRegion make_study_region(const std::string& name, const MultiPolygon& boundary,
                              const MultiPolygon* urban_layer, bool not_urban_intersection,
                              double buffer_m);

// Loads boundary (and urban layer when required) and builds the region.
StudyRegion prepare_study_region(const RegionSpec& spec, const ProjectConfig& config);

// Collects polygons from a feature file (Polygon/MultiPolygon features).
std::vector<Polygon> polygons_of(const FeatureFile& file, const std::string& context);

struct RasterCell {
  double x = 0.0;  // centroid
  double y = 0.0;
  double size = 0.0;
  double population = 0.0;
};

struct PopulationRaster {
  std::vector<RasterCell> cells;
  double cell_size = 0.0;
  double total() const;
};

// CSV `x,y,cell_size,population` (header required) or ESRI ASCII grid.
PopulationRaster load_population_raster(const std::string& path);
PopulationRaster parse_population_csv(const std::string& text, const std::string& context);
PopulationRaster parse_esri_ascii(const std::string& text, const std::string& context);

}  // namespace cityind
