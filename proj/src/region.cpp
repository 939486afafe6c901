#include "cityind/region.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cityind/clip.hpp"
#include "cityind/csv.hpp"
#include "cityind/util.hpp"

namespace cityind {

MultiPolygon dissolve_boundary(const std::vector<Polygon>& polygons, bool delete_holes) {
  if (polygons.empty()) throw InputError("dissolve: no polygons supplied");
  std::vector<MultiPolygon> parts;
  parts.reserve(polygons.size());
  for (const Polygon& p : polygons) {
    std::string reason;
    if (!polygon_valid(p, &reason)) throw InputError("dissolve: invalid polygon: " + reason);
    MultiPolygon mp;
    mp.polys.push_back(p);
    normalize_orientation(mp);
    parts.push_back(std::move(mp));
  }
  MultiPolygon out = union_all(std::move(parts));
  if (delete_holes) out = remove_holes(std::move(out));
  return out;
}

StudyRegion make_study_region(const std::string& name, const MultiPolygon& boundary,
                              const MultiPolygon* urban_layer, bool not_urban_intersection,
                              double buffer_m) {
  StudyRegion r;
  r.name = name;
  if (not_urban_intersection || urban_layer == nullptr) {
    r.urban = boundary;
  } else {
    r.urban = geom_intersection(boundary, *urban_layer);
    if (area(r.urban) <= 0.0)
      throw InputError("study region '" + name +
                       "': boundary and urban layer do not intersect");
  }
  r.urban = drop_slivers(std::move(r.urban));
  if (r.urban.empty()) throw InputError("study region '" + name + "': empty urban polygon");
  r.buffered = buffer(r.urban, buffer_m);
  r.area_km2 = area(r.urban) / 1e6;
  return r;
}

std::vector<Polygon> polygons_of(const FeatureFile& file, const std::string& ctx) {
  std::vector<Polygon> out;
  for (const Feature& f : file.features) {
    if (f.kind != GeomKind::Polygon && f.kind != GeomKind::MultiPolygon) continue;
    for (const Polygon& p : f.mpoly.polys) out.push_back(p);
  }
  if (out.empty()) throw InputError(ctx + ": no polygon features found");
  return out;
}

StudyRegion prepare_study_region(const RegionSpec& spec, const ProjectConfig& config) {
  FeatureFile bf = read_geojson(spec.boundary_path);
  MultiPolygon boundary = dissolve_boundary(polygons_of(bf, spec.boundary_path), true);

  MultiPolygon urban;
  const MultiPolygon* urban_ptr = nullptr;
  if (!spec.not_urban_intersection) {
    if (spec.urban_layer_path.empty())
      throw InputError("region '" + spec.name +
                       "': urban layer required unless not_urban_intersection is set");
    FeatureFile uf = read_geojson(spec.urban_layer_path);
    urban = dissolve_boundary(polygons_of(uf, spec.urban_layer_path), false);
    urban_ptr = &urban;
  }
  return make_study_region(spec.name, boundary, urban_ptr, spec.not_urban_intersection,
                           config.study_buffer_m);
}

double PopulationRaster::total() const {
  double t = 0.0;
  for (const RasterCell& c : cells) t += c.population;
  return t;
}

PopulationRaster parse_population_csv(const std::string& text, const std::string& ctx) {
  CsvTable t = parse_csv_text(text);
  int cx = t.require_col("x", ctx);
  int cy = t.require_col("y", ctx);
  int cs = t.require_col("cell_size", ctx);
  int cp = t.require_col("population", ctx);
  PopulationRaster r;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    std::string where = ctx + " row " + std::to_string(i + 2);
    if (static_cast<int>(row.size()) <= std::max(std::max(cx, cy), std::max(cs, cp)))
      throw InputError(where + ": too few columns");
    RasterCell c;
    c.x = parse_double_strict(row[cx], where + " x");
    c.y = parse_double_strict(row[cy], where + " y");
    c.size = parse_double_strict(row[cs], where + " cell_size");
    c.population = parse_double_strict(row[cp], where + " population");
    if (c.size <= 0.0) throw InputError(where + ": non-positive cell_size");
    if (c.population < 0.0) throw InputError(where + ": negative population");
    if (r.cell_size == 0.0) {
      r.cell_size = c.size;
    } else if (std::abs(r.cell_size - c.size) > 1e-9) {
      throw InputError(where + ": inconsistent cell_size (expected " + fmt_double(r.cell_size) + ")");
    }
    r.cells.push_back(c);
  }
  if (r.cells.empty()) throw InputError(ctx + ": no raster cells");
  return r;
}

PopulationRaster parse_esri_ascii(const std::string& text, const std::string& ctx) {
  std::istringstream in(text);
  long long ncols = -1, nrows = -1;
  double xll = 0.0, yll = 0.0, cellsize = 0.0, nodata = -9999.0;
  bool corner = true;
  std::string key;
  // header: ncols nrows xll{corner|center} yll{corner|center} cellsize [nodata_value]
  while (in >> key) {
    std::string k = lower_ascii(key);
    if (k == "ncols") in >> ncols;
    else if (k == "nrows") in >> nrows;
    else if (k == "xllcorner") { in >> xll; corner = true; }
    else if (k == "yllcorner") in >> yll;
    else if (k == "xllcenter") { in >> xll; corner = false; }
    else if (k == "yllcenter") in >> yll;
    else if (k == "cellsize") in >> cellsize;
    else if (k == "nodata_value") in >> nodata;
    else break;  // first data token
  }
  if (ncols <= 0 || nrows <= 0 || cellsize <= 0.0)
    throw InputError(ctx + ": malformed ESRI ASCII header");

  PopulationRaster r;
  r.cell_size = cellsize;
  double first = 0.0;
  bool have_first = false;
  {
    // `key` currently holds the first data token
    try {
      first = parse_double_strict(key, ctx);
      have_first = true;
    } catch (const InputError&) {
      throw InputError(ctx + ": unexpected header token '" + key + "'");
    }
  }
  double x0 = corner ? xll + cellsize * 0.5 : xll;
  double y0 = corner ? yll + cellsize * 0.5 : yll;
  long long total = ncols * nrows;
  for (long long i = 0; i < total; ++i) {
    double v;
    if (i == 0 && have_first) {
      v = first;
    } else if (!(in >> v)) {
      throw InputError(ctx + ": expected " + std::to_string(total) + " cells, got " + std::to_string(i));
    }
    if (v == nodata) continue;
    if (!std::isfinite(v)) throw InputError(ctx + ": non-finite population value");
    if (v < 0.0) throw InputError(ctx + ": negative population value");
    long long row = i / ncols, col = i % ncols;
    RasterCell c;
    c.x = x0 + static_cast<double>(col) * cellsize;
    c.y = y0 + static_cast<double>(nrows - 1 - row) * cellsize;
    c.size = cellsize;
    c.population = v;
    r.cells.push_back(c);
  }
  return r;
}

PopulationRaster load_population_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open population raster: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  // sniff: ESRI ASCII grids start with "ncols"
  std::string head = lower_ascii(trim(text.substr(0, 16)));
  if (head.rfind("ncols", 0) == 0) return parse_esri_ascii(text, path);
  return parse_population_csv(text, path);
}

}  // namespace cityind
