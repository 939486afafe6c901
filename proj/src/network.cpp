#include "cityind/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "cityind/util.hpp"

namespace cityind {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<long long, long long> quantize(const Point& p) {
  return {std::llround(p.x * 100.0), std::llround(p.y * 100.0)};
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

int StreetNetwork::edge_pos(int edge_id) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), edge_id,
                             [](const NetEdge& e, int id) { return e.id < id; });
  if (it == edges.end() || it->id != edge_id) return -1;
  return static_cast<int>(it - edges.begin());
}

StreetNetwork build_network_from_lines(std::vector<std::pair<int, Polyline>> lines,
                                       bool retain_all,
                                       std::optional<double> connect_threshold_m) {
  if (lines.empty()) throw InputError("network: empty edge set");
  if (connect_threshold_m && !retain_all)
    throw InputError("network: component_connect_threshold_m requires retain_all_components");

  std::sort(lines.begin(), lines.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < lines.size(); ++i)
    if (lines[i].first == lines[i - 1].first)
      throw InputError("network: duplicate edge id " + std::to_string(lines[i].first));

  StreetNetwork net;
  std::map<std::pair<long long, long long>, int> node_of;
  int dropped = 0;

  for (auto& [id, line] : lines) {
    double len = polyline_length(line);
    if (len <= 0.0) {
      ++dropped;
      continue;
    }
    auto key_a = quantize(line.front());
    auto key_b = quantize(line.back());
    auto intern = [&](const std::pair<long long, long long>& key, const Point& p) {
      auto it = node_of.find(key);
      if (it != node_of.end()) return it->second;
      int idx = static_cast<int>(net.nodes.size());
      net.nodes.push_back(p);
      node_of.emplace(key, idx);
      return idx;
    };
    NetEdge e;
    e.id = id;
    e.a = intern(key_a, line.front());
    e.b = intern(key_b, line.back());
    e.geom = std::move(line);
    e.length = len;
    net.edges.push_back(std::move(e));
  }
  if (dropped > 0) log_warn("network: dropped " + std::to_string(dropped) + " zero-length edge(s)");
  if (net.edges.empty()) throw InputError("network: all edges have zero length");

  // connected components over nodes
  DisjointSet ds(static_cast<int>(net.nodes.size()));
  for (const NetEdge& e : net.edges) ds.unite(e.a, e.b);
  std::map<int, double> comp_length;
  for (const NetEdge& e : net.edges) comp_length[ds.find(e.a)] += e.length;

  std::set<int> keep;
  if (retain_all && !connect_threshold_m) {
    for (const auto& [root, len] : comp_length) keep.insert(root);
  } else {
    int largest = -1;
    double best = -1.0;
    for (const auto& [root, len] : comp_length)
      if (len > best || (len == best && root < largest)) {
        best = len;
        largest = root;
      }
    keep.insert(largest);
    if (retain_all && connect_threshold_m) {
      double t = *connect_threshold_m;
      std::vector<std::vector<int>> comp_nodes_of;
      std::map<int, int> comp_index;
      for (int n = 0; n < static_cast<int>(net.nodes.size()); ++n) {
        int root = ds.find(n);
        auto [it, fresh] = comp_index.emplace(root, static_cast<int>(comp_nodes_of.size()));
        if (fresh) comp_nodes_of.emplace_back();
        comp_nodes_of[it->second].push_back(n);
      }
      bool changed = true;
      while (changed) {
        changed = false;
        for (const auto& [root, ci] : comp_index) {
          if (keep.count(root)) continue;
          double min_d = kInf;
          for (int n : comp_nodes_of[ci]) {
            for (const auto& [kroot, kci] : comp_index) {
              if (!keep.count(kroot)) continue;
              for (int m : comp_nodes_of[kci]) min_d = std::min(min_d, dist(net.nodes[n], net.nodes[m]));
            }
          }
          if (min_d <= t) {
            keep.insert(root);
            changed = true;
          }
        }
      }
    }
  }

  // drop edges outside kept components, compact node ids
  std::vector<NetEdge> kept_edges;
  for (NetEdge& e : net.edges)
    if (keep.count(ds.find(e.a))) kept_edges.push_back(std::move(e));
  if (kept_edges.empty()) throw InputError("network: no edges in retained components");

  std::vector<int> remap(net.nodes.size(), -1);
  std::vector<Point> new_nodes;
  for (NetEdge& e : kept_edges) {
    for (int* n : {&e.a, &e.b}) {
      if (remap[*n] < 0) {
        remap[*n] = static_cast<int>(new_nodes.size());
        new_nodes.push_back(net.nodes[*n]);
      }
      *n = remap[*n];
    }
  }
  net.nodes = std::move(new_nodes);
  net.edges = std::move(kept_edges);

  net.incident.assign(net.nodes.size(), {});
  for (int pos = 0; pos < static_cast<int>(net.edges.size()); ++pos) {
    net.incident[net.edges[pos].a].push_back(pos);
    net.incident[net.edges[pos].b].push_back(pos);
  }

  for (int pos = 0; pos < static_cast<int>(net.edges.size()); ++pos) {
    const Polyline& g = net.edges[pos].geom;
    for (size_t s = 0; s + 1 < g.size(); ++s)
      net.index.add(pos, static_cast<int>(s), g[s], g[s + 1]);
  }
  net.index.build();
  return net;
}

StreetNetwork build_network(const FeatureFile& file, const RegionSpec& spec,
                            const ProjectConfig&) {
  std::vector<std::pair<int, Polyline>> lines;
  bool any_id = false;
  for (const Feature& f : file.features)
    if (f.kind == GeomKind::LineString && f.has_prop("id")) any_id = true;
  int order = 0;
  for (const Feature& f : file.features) {
    if (f.kind != GeomKind::LineString) continue;
    int id = order;
    if (any_id) {
      if (!f.has_prop("id"))
        throw InputError("network edges: some features have an 'id' property and some do not");
      id = static_cast<int>(parse_int_strict(f.prop_string("id"), "edge id"));
    }
    lines.emplace_back(id, f.line);
    ++order;
  }
  return build_network_from_lines(std::move(lines), spec.retain_all_components,
                                  spec.component_connect_threshold_m);
}

std::vector<Point> consolidate_intersections(const StreetNetwork& net, double tolerance_m) {
  std::vector<int> cand;
  for (int n = 0; n < static_cast<int>(net.nodes.size()); ++n)
    if (net.degree(n) >= 3) cand.push_back(n);
  if (cand.empty()) return {};

  DisjointSet ds(static_cast<int>(cand.size()));
  for (size_t i = 0; i < cand.size(); ++i)
    for (size_t j = i + 1; j < cand.size(); ++j)
      if (dist(net.nodes[cand[i]], net.nodes[cand[j]]) <= tolerance_m)
        ds.unite(static_cast<int>(i), static_cast<int>(j));

  std::map<int, std::pair<Point, int>> acc;
  for (size_t i = 0; i < cand.size(); ++i) {
    int root = ds.find(static_cast<int>(i));
    auto& [sum, count] = acc[root];
    sum = sum + net.nodes[cand[i]];
    count += 1;
  }
  std::vector<Point> out;
  for (const auto& [root, sc] : acc)
    out.push_back({sc.first.x / sc.second, sc.first.y / sc.second});
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  return out;
}

std::vector<SamplePoint> generate_sample_points(const StreetNetwork& net, const HexGrid& grid,
                                                const ProjectConfig& config) {
  std::vector<SamplePoint> out;
  double step = config.sample_interval_m;
  for (int pos = 0; pos < static_cast<int>(net.edges.size()); ++pos) {
    const NetEdge& e = net.edges[pos];
    for (int k = 0;; ++k) {
      double offset = static_cast<double>(k) * step;
      if (offset >= e.length) break;  // terminal endpoint excluded
      Point p = net.point_on_edge(pos, offset);
      HexKey h = grid.containing(p);
      if (!grid.has(h) || !grid.cell(h).populated) continue;
      SamplePoint sp;
      sp.id = static_cast<int>(out.size());
      sp.edge_pos = pos;
      sp.offset = offset;
      sp.pos = p;
      out.push_back(sp);
    }
  }
  return out;
}

ReachState reach_from_point(const StreetNetwork& net, int edge_pos, double offset, double limit) {
  ReachState st;
  st.origin_edge_pos = edge_pos;
  st.origin_offset = offset;
  st.limit = limit;
  st.dist.assign(net.nodes.size(), kInf);

  const NetEdge& e0 = net.edges[edge_pos];
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  auto relax = [&](int node, double d) {
    if (d <= limit && d < st.dist[node]) {
      if (st.dist[node] == kInf) st.touched.push_back(node);
      st.dist[node] = d;
      heap.emplace(d, node);
    }
  };
  relax(e0.a, offset);
  relax(e0.b, e0.length - offset);

  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > st.dist[u]) continue;
    for (int pos : net.incident[u]) {
      const NetEdge& e = net.edges[pos];
      int v = (e.a == u) ? e.b : e.a;
      relax(v, d + e.length);
    }
  }
  return st;
}

namespace {
void add_interval(std::vector<std::pair<double, double>>& iv, double a, double b) {
  if (b > a) iv.emplace_back(a, b);
}

std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [a, b] : iv) {
    if (!out.empty() && a <= out.back().second)
      out.back().second = std::max(out.back().second, b);
    else
      out.emplace_back(a, b);
  }
  return out;
}
}  // namespace

Catchment catchment_from_state(const StreetNetwork& net, const ReachState& state, double limit) {
  Catchment c;
  c.origin_edge_pos = state.origin_edge_pos;
  c.origin_offset = state.origin_offset;
  if (limit > state.limit) throw InternalError("catchment limit exceeds reach state limit");

  // only edges incident to a reached node (plus the origin edge) can
  // carry intervals
  std::vector<int> candidates;
  candidates.push_back(state.origin_edge_pos);
  for (int u : state.touched)
    for (int pos : net.incident[u]) candidates.push_back(pos);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (int pos : candidates) {
    const NetEdge& e = net.edges[pos];
    std::vector<std::pair<double, double>> iv;
    double da = state.dist[e.a];
    double db = state.dist[e.b];
    if (da < limit) add_interval(iv, 0.0, std::min(e.length, limit - da));
    if (db < limit) add_interval(iv, std::max(0.0, e.length - (limit - db)), e.length);
    if (pos == state.origin_edge_pos) {
      double s = state.origin_offset;
      add_interval(iv, std::max(0.0, s - limit), std::min(e.length, s + limit));
    }
    for (const auto& [a, b] : merge_intervals(std::move(iv))) {
      c.reached.push_back({pos, a, b});
      c.total_length += b - a;
    }
  }
  return c;
}

Catchment bounded_reach(const StreetNetwork& net, int edge_pos, double offset, double limit) {
  ReachState st = reach_from_point(net, edge_pos, offset, limit);
  return catchment_from_state(net, st, limit);
}

std::optional<SnapResult> snap_to_network(const StreetNetwork& net, const Point& p,
                                          double tolerance_m) {
  auto hit = net.index.nearest(p, tolerance_m);
  if (!hit) return std::nullopt;
  const NetEdge& e = net.edges[hit->object_id];
  double offset = 0.0;
  for (int s = 0; s < hit->seg_index; ++s) offset += dist(e.geom[s], e.geom[s + 1]);
  offset += hit->t * dist(e.geom[hit->seg_index], e.geom[hit->seg_index + 1]);
  SnapResult r;
  r.edge_pos = hit->object_id;
  r.offset = offset;
  r.snap_dist = hit->distance;
  r.pos = hit->closest;
  return r;
}

std::optional<double> nearest_destination_distance(const StreetNetwork& net,
                                                   const ReachState& state,
                                                   const std::vector<SnapResult>& destinations,
                                                   double search_limit_m) {
  if (search_limit_m > state.limit)
    throw InternalError("search limit exceeds reach state limit");
  double best = kInf;
  for (const SnapResult& d : destinations) {
    const NetEdge& e = net.edges[d.edge_pos];
    double via_a = state.dist[e.a] + d.offset;
    double via_b = state.dist[e.b] + (e.length - d.offset);
    double cand = std::min(via_a, via_b);
    if (d.edge_pos == state.origin_edge_pos)
      cand = std::min(cand, std::abs(state.origin_offset - d.offset));
    best = std::min(best, cand);
  }
  if (best <= search_limit_m) return best;
  return std::nullopt;
}

std::optional<double> nearest_destination_distance(const StreetNetwork& net, int edge_pos,
                                                   double offset,
                                                   const std::vector<SnapResult>& destinations,
                                                   double search_limit_m) {
  ReachState st = reach_from_point(net, edge_pos, offset, search_limit_m);
  return nearest_destination_distance(net, st, destinations, search_limit_m);
}

}  // namespace cityind
