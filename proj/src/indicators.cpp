#include "cityind/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cityind/util.hpp"

namespace cityind {

int binary_access(const std::optional<double>& distance_m, double threshold_m) {
  return (distance_m && *distance_m <= threshold_m) ? 1 : 0;
}

int daily_living_score(int food, int convenience, int pt_any) {
  return food + convenience + pt_any;
}

std::vector<double> zscore_series(const std::vector<double>& values) {
  size_t n = values.size();
  if (n == 0) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);  // population variance
  double sd = std::sqrt(var);
  std::vector<double> out(n, 0.0);
  if (sd > 0.0)
    for (size_t i = 0; i < n; ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

Densities catchment_densities(const Catchment& catchment, const StreetNetwork& net,
                              const HexGrid& grid, const std::vector<Point>& intersections) {
  std::vector<HexKey> cells;
  cells.reserve(intersections.size());
  for (const Point& p : intersections) cells.push_back(grid.containing(p));
  return catchment_densities(catchment, net, grid, cells);
}

Densities catchment_densities(const Catchment& catchment, const StreetNetwork& net,
                              const HexGrid& grid,
                              const std::vector<HexKey>& intersection_cells) {
  constexpr double kSqrt3 = 1.7320508075688772;
  double R = grid.radius();
  Point anchor = grid.anchor();

  std::set<HexKey> cellset;
  for (const EdgeInterval& iv : catchment.reached) {
    const NetEdge& e = net.edges[iv.edge_pos];
    Polyline part = clip_polyline(e.geom, iv.a, iv.b);
    for (size_t s = 0; s + 1 < part.size(); ++s) {
      const Point& a = part[s];
      const Point& b = part[s + 1];
      // candidate hexes around the segment bbox
      double minx = std::min(a.x, b.x), maxx = std::max(a.x, b.x);
      double miny = std::min(a.y, b.y), maxy = std::max(a.y, b.y);
      int r_lo = static_cast<int>(std::floor((miny - R - anchor.y) / (1.5 * R))) - 1;
      int r_hi = static_cast<int>(std::ceil((maxy + R - anchor.y) / (1.5 * R))) + 1;
      for (int r = r_lo; r <= r_hi; ++r) {
        double row_shift = static_cast<double>(r) / 2.0;
        int q_lo = static_cast<int>(std::floor((minx - R - anchor.x) / (kSqrt3 * R) - row_shift)) - 1;
        int q_hi = static_cast<int>(std::ceil((maxx + R - anchor.x) / (kSqrt3 * R) - row_shift)) + 1;
        for (int q = q_lo; q <= q_hi; ++q) {
          HexKey k{q, r};
          if (cellset.count(k) || !grid.has(k)) continue;
          if (segment_intersects_convex(a, b, grid.cell_polygon(k))) cellset.insert(k);
        }
      }
    }
  }

  Densities d;
  d.cellset.assign(cellset.begin(), cellset.end());
  if (cellset.empty()) return d;

  double pop = 0.0;
  for (const HexKey& k : cellset) pop += grid.cell(k).population;
  double area_km2 = grid.cell_area_km2() * static_cast<double>(cellset.size());

  int n_int = 0;
  for (const HexKey& k : intersection_cells)
    if (cellset.count(k)) ++n_int;

  d.pop_per_km2 = pop / area_km2;
  d.intersections_per_km2 = static_cast<double>(n_int) / area_km2;
  return d;
}

void apply_within_city_walkability(std::vector<SamplePointRecord>& records) {
  size_t n = records.size();
  std::vector<double> pop(n), inter(n), dl(n);
  for (size_t i = 0; i < n; ++i) {
    pop[i] = records[i].pop_density;
    inter[i] = records[i].int_density;
    dl[i] = static_cast<double>(records[i].daily_living);
  }
  auto zp = zscore_series(pop);
  auto zi = zscore_series(inter);
  auto zd = zscore_series(dl);
  for (size_t i = 0; i < n; ++i)
    records[i].walkability_within = zp[i] + zi[i] + zd[i];
}

std::vector<HexAggregate> aggregate_to_hex(const std::vector<SamplePointRecord>& records,
                                           const HexGrid& grid, size_t n_categories) {
  std::map<HexKey, HexAggregate> by_hex;
  for (const SamplePointRecord& rec : records) {
    auto [it, fresh] = by_hex.try_emplace(rec.hex);
    HexAggregate& agg = it->second;
    if (fresh) {
      agg.key = rec.hex;
      agg.center = grid.center(rec.hex);
      agg.population = grid.has(rec.hex) ? grid.cell(rec.hex).population : 0.0;
      agg.access_mean.assign(n_categories, 0.0);
      agg.soft_access.assign(n_categories, false);
    }
    agg.sample_count += 1;
    agg.pop_density_mean += rec.pop_density;
    agg.int_density_mean += rec.int_density;
    agg.daily_living_mean += static_cast<double>(rec.daily_living);
    agg.walk_within_mean += rec.walkability_within;
    for (size_t c = 0; c < n_categories; ++c) agg.access_mean[c] += rec.access[c];
  }

  std::vector<HexAggregate> out;
  out.reserve(by_hex.size());
  for (auto& [key, agg] : by_hex) {
    double n = static_cast<double>(agg.sample_count);
    agg.pop_density_mean /= n;
    agg.int_density_mean /= n;
    agg.daily_living_mean /= n;
    agg.walk_within_mean /= n;
    for (size_t c = 0; c < n_categories; ++c) {
      agg.access_mean[c] /= n;
      agg.soft_access[c] = agg.access_mean[c] >= 0.5;
    }
    out.push_back(std::move(agg));
  }
  return out;  // map iteration is already key-sorted
}

double population_percent_with_access(const std::vector<HexAggregate>& aggs,
                                      size_t category_index) {
  double pop = 0.0, weighted = 0.0;
  for (const HexAggregate& a : aggs) {
    pop += a.population;
    weighted += a.population * a.access_mean[category_index];
  }
  if (pop <= 0.0) throw InputError("access percent: total population is zero");
  return 100.0 * weighted / pop;
}

namespace {
std::string classify_value(double v, const ScenarioThreshold& s) {
  if (v < s.lower) return "below";
  if (v > s.upper) return "exceeds";
  return "within";
}

double scenario_value(const HexAggregate& a, const ScenarioThreshold& s) {
  return s.variable == "population_density" ? a.pop_density_mean : a.int_density_mean;
}
}  // namespace

ScenarioExposure scenario_exposure(const std::vector<HexAggregate>& aggs,
                                   const ScenarioThreshold& scenario) {
  ScenarioExposure out;
  double pop = 0.0, meeting = 0.0;
  for (const HexAggregate& a : aggs) {
    std::string cls = classify_value(scenario_value(a, scenario), scenario);
    out.hex_class.push_back(cls);
    pop += a.population;
    if (cls != "below") meeting += a.population;
  }
  if (pop <= 0.0) throw InputError("scenario exposure: total population is zero");
  out.percent_meeting = 100.0 * meeting / pop;
  return out;
}

void classify_scenarios(std::vector<HexAggregate>& aggs,
                        const std::vector<ScenarioThreshold>& scenarios) {
  for (HexAggregate& a : aggs) {
    a.scenario_class.clear();
    for (const ScenarioThreshold& s : scenarios)
      a.scenario_class.push_back(classify_value(scenario_value(a, s), s));
  }
}

void apply_between_city_walkability(std::vector<std::vector<HexAggregate>*> region_aggs) {
  std::vector<double> pop, inter, dl;
  for (const auto* aggs : region_aggs)
    for (const HexAggregate& a : *aggs) {
      pop.push_back(a.pop_density_mean);
      inter.push_back(a.int_density_mean);
      dl.push_back(a.daily_living_mean);
    }
  auto zp = zscore_series(pop);
  auto zi = zscore_series(inter);
  auto zd = zscore_series(dl);
  size_t i = 0;
  for (auto* aggs : region_aggs)
    for (HexAggregate& a : *aggs) {
      a.z_pop_between = zp[i];
      a.z_int_between = zi[i];
      a.z_dl_between = zd[i];
      a.walk_between = zp[i] + zi[i] + zd[i];
      ++i;
    }
}

CitySummary city_summary(const std::string& region_name, const std::string& income_group,
                         double area_km2, const std::vector<HexAggregate>& aggs,
                         const std::vector<std::string>& categories,
                         const std::vector<bool>& measured,
                         const std::vector<ScenarioThreshold>& scenarios,
                         std::optional<double> pm25) {
  CitySummary s;
  s.region = region_name;
  s.income_group = income_group;
  s.area_km2 = area_km2;
  s.pm25_tonnes = pm25;

  for (const HexAggregate& a : aggs) {
    s.population += a.population;
    s.sample_point_count += a.sample_count;
  }

  for (size_t c = 0; c < categories.size(); ++c) {
    std::optional<double> pct;
    if (measured[c]) pct = population_percent_with_access(aggs, c);
    s.access_percent.emplace_back(categories[c], pct);
  }
  for (const ScenarioThreshold& sc : scenarios)
    s.scenario_percent.push_back(scenario_exposure(aggs, sc).percent_meeting);

  double n = static_cast<double>(aggs.size());
  double pop = s.population;
  for (const HexAggregate& a : aggs) {
    s.mean_pop_density += a.pop_density_mean / n;
    s.mean_int_density += a.int_density_mean / n;
    s.mean_daily_living += a.daily_living_mean / n;
    s.mean_walkability += a.walk_within_mean / n;
    if (pop > 0.0) {
      s.wmean_pop_density += a.population * a.pop_density_mean / pop;
      s.wmean_int_density += a.population * a.int_density_mean / pop;
      s.wmean_daily_living += a.population * a.daily_living_mean / pop;
      s.wmean_walkability += a.population * a.walk_within_mean / pop;
    }
  }
  return s;
}

}  // namespace cityind
