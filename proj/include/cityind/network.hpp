#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/geojson.hpp"
#include "cityind/geom.hpp"
#include "cityind/hexgrid.hpp"
#include "cityind/seg_index.hpp"

namespace cityind {

struct NetEdge {
  int id = -1;  // external id (input property or file order)
  int a = -1;   // node indices
  int b = -1;
  Polyline geom;
  double length = 0.0;
};

struct StreetNetwork {
  std::vector<Point> nodes;
  std::vector<NetEdge> edges;             // sorted by id; index == position
  std::vector<std::vector<int>> incident;  // node -> edge positions
  SegmentIndex index;                      // object_id = edge position

  int degree(int node) const { return static_cast<int>(incident[node].size()); }
  int edge_pos(int edge_id) const;  // position by external id, -1 if absent
  Point point_on_edge(int pos, double offset) const {
    return point_along(edges[pos].geom, offset);
  }
};

// Core builder from (id, polyline) pairs. Endpoints are matched by 0.01 m
// coordinate quantization. Zero-length lines are dropped with a warning;
// an error is raised only if nothing survives. Component retention:
//  - retain_all = false: largest component by total edge length
//  - retain_all = true, no threshold: everything
//  - retain_all = true, threshold t: largest component plus, iteratively,
//    any component whose minimum node-to-node distance to the retained
//    set is <= t
StreetNetwork build_network_from_lines(std::vector<std::pair<int, Polyline>> lines,
                                       bool retain_all,
                                       std::optional<double> connect_threshold_m);

StreetNetwork build_network(const FeatureFile& edges, const RegionSpec& spec,
                            const ProjectConfig& config);

// Consolidated intersections: degree >= 3 nodes, single-linkage clustered
// at `tolerance_m`, one centroid per cluster, sorted by (x, y).
std::vector<Point> consolidate_intersections(const StreetNetwork& net, double tolerance_m);

struct SamplePoint {
  int id = -1;
  int edge_pos = -1;
  double offset = 0.0;
  Point pos;
};

// Regular offsets 0, s, 2s, ... along each edge (terminal endpoint
// excluded), kept only inside populated hex cells.
std::vector<SamplePoint> generate_sample_points(const StreetNetwork& net, const HexGrid& grid,
                                                const ProjectConfig& config);

// Node distances from a point on an edge, bounded by `limit` (unreached
// nodes stay infinite). `touched` lists the nodes with finite distance.
struct ReachState {
  int origin_edge_pos = -1;
  double origin_offset = 0.0;
  double limit = 0.0;
  std::vector<double> dist;
  std::vector<int> touched;
};

ReachState reach_from_point(const StreetNetwork& net, int edge_pos, double offset, double limit);

struct EdgeInterval {
  int edge_pos = -1;
  double a = 0.0;
  double b = 0.0;
};

struct Catchment {
  int origin_edge_pos = -1;
  double origin_offset = 0.0;
  std::vector<EdgeInterval> reached;  // disjoint per edge, sorted
  double total_length = 0.0;
};

Catchment bounded_reach(const StreetNetwork& net, int edge_pos, double offset, double limit);
Catchment catchment_from_state(const StreetNetwork& net, const ReachState& state, double limit);

struct SnapResult {
  int edge_pos = -1;
  double offset = 0.0;
  double snap_dist = 0.0;
  Point pos;
};

std::optional<SnapResult> snap_to_network(const StreetNetwork& net, const Point& p,
                                          double tolerance_m);

// Minimum network distance from the state's origin to any snapped point;
// nullopt beyond search_limit. The Euclidean snap leg is not added.
std::optional<double> nearest_destination_distance(const StreetNetwork& net,
                                                   const ReachState& state,
                                                   const std::vector<SnapResult>& destinations,
                                                   double search_limit_m);

std::optional<double> nearest_destination_distance(const StreetNetwork& net, int edge_pos,
                                                   double offset,
                                                   const std::vector<SnapResult>& destinations,
                                                   double search_limit_m);

}  // namespace cityind
