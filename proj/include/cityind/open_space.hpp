#pragma once

#include <string>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/geojson.hpp"
#include "cityind/geom.hpp"
#include "cityind/seg_index.hpp"

namespace cityind {

struct OsCandidate {
  int input_index = -1;
  MultiPolygon geom;
  TagMap tags;
  double area_ha = 0.0;
  double mbc_area_m2 = 0.0;
  double roundness = 0.0;
  bool linear_feature = false;
  bool water = false;
};

struct OpenSpaceArea {
  int os_id = -1;
  MultiPolygon geom;
  double area_ha = 0.0;
  double public_area_ha = 0.0;
  double mbc_area_m2 = 0.0;
  double roundness = 0.0;
  bool linear_feature = false;
  bool water = false;
  bool large = false;  // public_area_ha > pos_large_area_ha
};

struct OsEntryPoint {
  int os_id = -1;
  Point pos;
};

// --- tag predicates ---
bool is_pos_candidate(const TagMap& tags);
bool is_pos_exclusion(const TagMap& tags);  // military/agricultural/forestry keys, water values
bool is_non_public(const TagMap& tags);     // not public itself, may sit inside a public area
bool has_water_value(const TagMap& tags);
bool has_linear_key(const TagMap& tags);  // waterway / river keys present

struct ShapeMetrics {
  double area_ha = 0.0;
  double mbc_area_m2 = 0.0;
  double roundness = 0.0;  // area / MBC area, in (0, 1]
};
ShapeMetrics shape_metrics(const MultiPolygon& geom);
bool linear_by_shape(const ShapeMetrics& m);  // area_ha > 0.5 && roundness < 0.25

// --- staged pipeline ---
std::vector<OsCandidate> identify_candidates(const std::vector<Feature>& features);

// Subtracts the union of exclusion geometry; empty remainders are dropped.
std::vector<OsCandidate> apply_exclusions(std::vector<OsCandidate> candidates,
                                          const MultiPolygon& exclusion_union);

// Groups touching/overlapping non-linear candidates (transitive). A linear
// candidate joins a group only when it directly touches exactly one group;
// linear features never bridge two groups and never stand alone.
std::vector<OpenSpaceArea> merge_contiguous(const std::vector<OsCandidate>& candidates);

double public_overlap_ha(const OpenSpaceArea& area, const MultiPolygon& non_public_union);

struct PosFilterResult {
  std::vector<OpenSpaceArea> all_pos;  // area >= pos_min_area_m2, `large` flag set
};
PosFilterResult filter_and_threshold(std::vector<OpenSpaceArea> areas, const ProjectConfig& config);

// Entry points every `spacing` metres along boundary arcs that lie within
// `proximity` of the street network (boundary sampled at 1 m).
std::vector<OsEntryPoint> generate_entry_points(const OpenSpaceArea& area,
                                                const SegmentIndex& net_index, double spacing,
                                                double proximity);

struct PosResult {
  std::vector<OpenSpaceArea> areas;
  std::vector<OsEntryPoint> entries_any;
  std::vector<OsEntryPoint> entries_large;
  int skipped_features = 0;
};

PosResult build_open_space(const std::vector<Feature>& features, const SegmentIndex& net_index,
                           const ProjectConfig& config);

}  // namespace cityind
