#include <doctest.h>

#include <cmath>
#include <set>

#include "cityind/clip.hpp"
#include "cityind/indicators.hpp"
#include "support/oracles.hpp"

using namespace cityind;

namespace {

StudyRegion square_region(double x0, double y0, double side, double buffer_m) {
  StudyRegion r;
  r.name = "t";
  Polygon p = {{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}, {}};
  r.urban.polys.push_back(p);
  r.buffered = buffer(r.urban, buffer_m);
  r.area_km2 = side * side / 1e6;
  return r;
}

}  // namespace

TEST_CASE("binary access boundaries") {
  CHECK(binary_access(499.9, 500.0) == 1);
  CHECK(binary_access(500.0, 500.0) == 1);  // inclusive
  CHECK(binary_access(500.0001, 500.0) == 0);
  CHECK(binary_access(std::nullopt, 500.0) == 0);
}

TEST_CASE("daily living is the sum of the three binaries") {
  CHECK(daily_living_score(1, 1, 1) == 3);
  CHECK(daily_living_score(0, 0, 0) == 0);
  CHECK(daily_living_score(1, 0, 1) == 2);
}

TEST_CASE("z-scores: hand-computed, constant, single") {
  auto z = zscore_series({1, 2, 3});
  REQUIRE(z.size() == 3);
  CHECK(z[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.2247).epsilon(1e-4));

  for (double v : zscore_series({7, 7, 7, 7})) CHECK(v == 0.0);
  CHECK(zscore_series({42.0}) == std::vector<double>{0.0});
}

TEST_CASE("z-scores: mean 0, population sd 1, affine invariance") {
  oracle::Rng rng(0x25C02EULL);
  for (int it = 0; it < 30; ++it) {
    int n = rng.uniform_int(2, 200);
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(rng.uniform(-1000, 1000));
    auto z = zscore_series(v);
    double mean = 0, var = 0;
    for (double x : z) mean += x;
    mean /= n;
    for (double x : z) var += (x - mean) * (x - mean);
    var /= n;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(var - 1.0) < 1e-9);

    double a = rng.uniform(0.1, 50.0), b = rng.uniform(-100, 100);
    std::vector<double> w;
    for (double x : v) w.push_back(a * x + b);
    auto zw = zscore_series(w);
    for (int i = 0; i < n; ++i) CHECK(std::abs(z[i] - zw[i]) < 1e-9);
  }
}

TEST_CASE("hex grid cell count matches an independent enumeration") {
  ProjectConfig cfg;
  StudyRegion region = square_region(0, 0, 1000, cfg.study_buffer_m);
  HexGrid grid = build_hex_grid(region, cfg);

  // independent enumeration: a candidate hexagon counts when it overlaps
  // the buffered polygon or touches its boundary
  double R = grid.radius();
  oracle::Pt anchor{grid.anchor().x, grid.anchor().y};
  const Ring& ring = region.buffered.polys[0].outer;
  std::vector<oracle::Pt> oring;
  for (const Point& p : ring) oring.push_back({p.x, p.y});

  int count = 0;
  for (int r = -30; r <= 40; ++r)
    for (int q = -40; q <= 40; ++q) {
      auto hex = oracle::hex_ring(oracle::hex_center(anchor, R, q, r), R);
      auto overlap = oracle::clip_convex(oring, hex);
      bool hit = !overlap.empty() && oracle::ring_area(overlap) > 0.0;
      for (size_t i = 0; i < oring.size() && !hit; ++i)
        hit = oracle::seg_hits_convex(oring[i], oring[(i + 1) % oring.size()], hex);
      if (hit) ++count;
    }
  CHECK(static_cast<int>(grid.size()) == count);
  CHECK(grid.size() > 0);

  // every stored cell contains its own centre
  for (const HexKey& k : grid.keys_sorted()) {
    CHECK(grid.containing(grid.center(k)) == k);
  }
}

TEST_CASE("hex grid shifts exactly with a full lattice translation") {
  ProjectConfig cfg;
  StudyRegion a = square_region(0, 0, 777, cfg.study_buffer_m);
  double R = cfg.hex_diag_m / 2.0;
  double dx = 1.7320508075688772 * R;  // one q step
  StudyRegion b = square_region(dx, 0, 777, cfg.study_buffer_m);
  HexGrid ga = build_hex_grid(a, cfg);
  HexGrid gb = build_hex_grid(b, cfg);
  CHECK(ga.size() == gb.size());
  auto ka = ga.keys_sorted(), kb = gb.keys_sorted();
  REQUIRE(ka == kb);  // keys are anchor-relative, so identical
  for (size_t i = 0; i < ka.size(); ++i) {
    CHECK(gb.center(kb[i]).x == doctest::Approx(ga.center(ka[i]).x + dx).epsilon(1e-12));
    CHECK(gb.center(kb[i]).y == doctest::Approx(ga.center(ka[i]).y).epsilon(1e-12));
  }
}

TEST_CASE("region smaller than one hex still gets at least one cell") {
  ProjectConfig cfg;
  StudyRegion tiny = square_region(0, 0, 10, 5.0);
  HexGrid grid = build_hex_grid(tiny, cfg);
  CHECK(grid.size() >= 1);
}

TEST_CASE("population apportionment: containment, split, conservation") {
  ProjectConfig cfg;
  StudyRegion region = square_region(0, 0, 2000, cfg.study_buffer_m);
  HexGrid grid = build_hex_grid(region, cfg);

  // a cell fully inside one hex gets the whole count
  HexKey somewhere = grid.containing({1000, 1000});
  Point c = grid.center(somewhere);
  PopulationRaster tiny;
  tiny.cell_size = 10;
  tiny.cells = {{c.x, c.y, 10, 42.0}};
  HexGrid g1 = grid;
  apportion_population(g1, tiny, cfg.pop_min_threshold);
  CHECK(g1.cell(somewhere).population == doctest::Approx(42.0));
  CHECK(g1.cell(somewhere).populated);

  // conservation on fuzzed rasters fully covered by the grid
  oracle::Rng rng(0xC0535ULL);
  for (int it = 0; it < 10; ++it) {
    PopulationRaster r;
    r.cell_size = 100;
    int n = rng.uniform_int(1, 40);
    for (int i = 0; i < n; ++i)
      r.cells.push_back({rng.uniform(100, 1900), rng.uniform(100, 1900), 100.0,
                         static_cast<double>(rng.uniform_int(0, 500))});
    HexGrid g = grid;
    ApportionStats stats = apportion_population(g, r, cfg.pop_min_threshold);
    double total = 0.0;
    for (const auto& [k, cell] : g.cells()) total += cell.population;
    CHECK(stats.dropped == 0.0);
    CHECK(std::abs(total - r.total()) <= 1e-6 * std::max(1.0, r.total()));
  }

  // populated flag respects the threshold (boundary inclusive)
  PopulationRaster thr;
  thr.cell_size = 10;
  thr.cells = {{c.x, c.y, 10, cfg.pop_min_threshold}};
  HexGrid g2 = grid;
  apportion_population(g2, thr, cfg.pop_min_threshold);
  CHECK(g2.cell(somewhere).populated);

  // a raster cell centred on the shared vertical edge of two hexes splits 50/50
  HexKey left{somewhere.q - 1, somewhere.r};
  REQUIRE(grid.has(left));
  double edge_x = c.x - 1.7320508075688772 / 2.0 * grid.radius();
  PopulationRaster split;
  split.cell_size = 50;
  split.cells = {{edge_x, c.y, 50, 100.0}};
  HexGrid g3 = grid;
  apportion_population(g3, split, cfg.pop_min_threshold);
  CHECK(g3.cell(somewhere).population == doctest::Approx(50.0));
  CHECK(g3.cell(left).population == doctest::Approx(50.0));

  // cells with no grid overlap are dropped and counted
  PopulationRaster outside;
  outside.cell_size = 10;
  outside.cells = {{1e7, 1e7, 10, 77.0}};
  HexGrid g4 = grid;
  ApportionStats dropped = apportion_population(g4, outside, cfg.pop_min_threshold);
  CHECK(dropped.dropped == doctest::Approx(77.0));
  CHECK(dropped.dropped_cells == 1);
}

TEST_CASE("catchment densities: ratio, cellset, zero intersections") {
  ProjectConfig cfg;
  StudyRegion region = square_region(0, 0, 500, 10.0);
  HexGrid grid = build_hex_grid(region, cfg);
  HexKey k = grid.containing({250, 250});
  grid.cell(k).population = grid.cell_area_km2() * 10000.0;  // density 10000 per km2

  // a short reach interval whose edge sits entirely inside cell k
  Point c = grid.center(k);
  StreetNetwork net = build_network_from_lines(
      {{0, {{c.x - 20, c.y}, {c.x + 20, c.y}}}}, false, std::nullopt);
  Catchment reach = bounded_reach(net, 0, 20.0, 10.0);

  Densities d = catchment_densities(reach, net, grid, std::vector<Point>{});
  REQUIRE(d.cellset.size() == 1);
  CHECK(d.cellset[0] == k);
  CHECK(d.pop_per_km2 == doctest::Approx(10000.0));
  CHECK(d.intersections_per_km2 == 0.0);

  // intersections inside and outside the cellset
  Densities d2 = catchment_densities(reach, net, grid, std::vector<Point>{{c.x + 5, c.y + 5}, {c.x + 5000, c.y}});
  CHECK(d2.intersections_per_km2 == doctest::Approx(1.0 / grid.cell_area_km2()));

  // empty catchment -> zero densities
  Catchment empty;
  Densities d3 = catchment_densities(empty, net, grid, std::vector<Point>{});
  CHECK(d3.pop_per_km2 == 0.0);
  CHECK(d3.cellset.empty());
}

namespace {
SamplePointRecord rec_with(HexKey hex, double pop_d, double int_d, std::vector<int> access) {
  SamplePointRecord r;
  r.hex = hex;
  r.pop_density = pop_d;
  r.int_density = int_d;
  r.access.assign(access.begin(), access.end());
  r.dist.resize(access.size());
  r.daily_living = access.size() >= 3 ? access[0] + access[1] + access[2] : 0;
  return r;
}
}  // namespace

TEST_CASE("hex aggregation: means, soft access boundary, idempotence") {
  HexGrid grid(250.0, {0, 0});
  HexKey k{1, 1};
  grid.insert(k);
  grid.cell(k).population = 120.0;

  std::vector<SamplePointRecord> recs = {
      rec_with(k, 6000, 100, {1, 1, 1}),
      rec_with(k, 5000, 80, {1, 0, 1}),
      rec_with(k, 4000, 90, {0, 0, 1}),
  };
  auto aggs = aggregate_to_hex(recs, grid, 3);
  REQUIRE(aggs.size() == 1);
  const HexAggregate& a = aggs[0];
  CHECK(a.sample_count == 3);
  CHECK(a.population == doctest::Approx(120.0));
  CHECK(a.pop_density_mean == doctest::Approx(5000.0));
  CHECK(a.access_mean[0] == doctest::Approx(2.0 / 3.0));
  CHECK(a.soft_access[0]);        // 2/3 >= 0.5
  CHECK(!a.soft_access[1]);       // 1/3 < 0.5
  CHECK(a.soft_access[2]);        // 1.0
  CHECK(a.daily_living_mean == doctest::Approx((3 + 2 + 1) / 3.0));

  // exact 0.5 counts as soft access
  std::vector<SamplePointRecord> half = {rec_with(k, 1, 1, {1, 0, 0}),
                                         rec_with(k, 1, 1, {0, 0, 0})};
  auto ha = aggregate_to_hex(half, grid, 3);
  CHECK(ha[0].access_mean[0] == doctest::Approx(0.5));
  CHECK(ha[0].soft_access[0]);

  // a hex whose points all share value v reports exactly v
  std::vector<SamplePointRecord> same = {rec_with(k, 123.25, 7.5, {1, 1, 0}),
                                         rec_with(k, 123.25, 7.5, {1, 1, 0})};
  auto sa = aggregate_to_hex(same, grid, 3);
  CHECK(sa[0].pop_density_mean == 123.25);
  CHECK(sa[0].int_density_mean == 7.5);
}

TEST_CASE("population percent with access") {
  HexGrid grid(250.0, {0, 0});
  grid.insert({0, 0});
  grid.insert({1, 0});
  grid.cell({0, 0}).population = 100.0;
  grid.cell({1, 0}).population = 300.0;

  std::vector<SamplePointRecord> recs = {rec_with({0, 0}, 1, 1, {1, 1, 1}),
                                         rec_with({1, 0}, 1, 1, {0, 1, 1})};
  auto aggs = aggregate_to_hex(recs, grid, 3);
  CHECK(population_percent_with_access(aggs, 0) == doctest::Approx(25.0));
  CHECK(population_percent_with_access(aggs, 1) == doctest::Approx(100.0));

  // zero population is an error
  grid.cell({0, 0}).population = 0.0;
  grid.cell({1, 0}).population = 0.0;
  auto zero = aggregate_to_hex(recs, grid, 3);
  CHECK_THROWS_AS(population_percent_with_access(zero, 0), InputError);
}

TEST_CASE("scenario classification boundaries use the configured bounds") {
  ScenarioThreshold sc{"A", "population_density", 4790.0, 6750.0};
  HexGrid grid(250.0, {0, 0});
  grid.insert({0, 0});
  grid.cell({0, 0}).population = 10.0;

  auto mk = [&](double v) {
    auto aggs = aggregate_to_hex({rec_with({0, 0}, v, 0, {0, 0, 0})}, grid, 3);
    return scenario_exposure(aggs, sc);
  };
  CHECK(mk(4790.0).hex_class[0] == "within");
  CHECK(mk(4790.0).percent_meeting == doctest::Approx(100.0));
  CHECK(mk(4789.9).hex_class[0] == "below");
  CHECK(mk(4789.9).percent_meeting == doctest::Approx(0.0));
  CHECK(mk(6750.0).hex_class[0] == "within");
  CHECK(mk(6750.1).hex_class[0] == "exceeds");
  CHECK(mk(6750.1).percent_meeting == doctest::Approx(100.0));
}

TEST_CASE("scenario classes partition and percentages hit 0 and 100") {
  ScenarioThreshold sc{"B", "intersection_density", 106.0, 156.0};
  HexGrid grid(250.0, {0, 0});
  std::vector<SamplePointRecord> recs;
  for (int i = 0; i < 6; ++i) {
    HexKey k{i, 0};
    grid.insert(k);
    grid.cell(k).population = 10.0;
    recs.push_back(rec_with(k, 0, 50.0 + 30.0 * i, {0, 0, 0}));  // 50..200
  }
  auto aggs = aggregate_to_hex(recs, grid, 3);
  auto exp = scenario_exposure(aggs, sc);
  std::set<std::string> seen(exp.hex_class.begin(), exp.hex_class.end());
  CHECK(seen.size() == 3);  // below, within, exceeds all present
  int meeting = 0;
  for (const auto& c : exp.hex_class)
    if (c != "below") ++meeting;
  CHECK(exp.percent_meeting == doctest::Approx(100.0 * meeting / 6.0));
}

TEST_CASE("within-city walkability: zeros at the mean and for uniform cities") {
  std::vector<SamplePointRecord> recs = {rec_with({0, 0}, 5000, 100, {1, 1, 1}),
                                         rec_with({0, 0}, 5000, 100, {1, 1, 1})};
  apply_within_city_walkability(recs);
  for (const auto& r : recs) CHECK(r.walkability_within == 0.0);

  std::vector<SamplePointRecord> three = {rec_with({0, 0}, 4000, 90, {0, 0, 0}),
                                          rec_with({0, 0}, 5000, 100, {1, 1, 1}),
                                          rec_with({0, 0}, 6000, 110, {1, 1, 1})};
  three[0].daily_living = 0;
  three[1].daily_living = 3;
  three[2].daily_living = 3;
  apply_within_city_walkability(three);
  // middle record sits at the mean of densities but not of daily living
  CHECK(three[2].walkability_within > three[0].walkability_within);
}

TEST_CASE("between-city z-scores: dominant region gets positive scores") {
  auto mk_aggs = [](double pop_d, double int_d, double dl, int n) {
    std::vector<HexAggregate> aggs;
    for (int i = 0; i < n; ++i) {
      HexAggregate a;
      a.key = {i, 0};
      a.population = 10.0;
      a.pop_density_mean = pop_d;
      a.int_density_mean = int_d;
      a.daily_living_mean = dl;
      aggs.push_back(a);
    }
    return aggs;
  };
  auto strong = mk_aggs(8000, 150, 2.5, 2);
  auto weak = mk_aggs(2000, 50, 0.5, 2);
  apply_between_city_walkability({&strong, &weak});
  for (const auto& a : strong) CHECK(a.walk_between > 0.0);
  for (const auto& a : weak) CHECK(a.walk_between < 0.0);
  // two identical halves: per-region mean of each z component is 0
  double sum = 0.0;
  for (const auto& a : strong) sum += a.walk_between;
  for (const auto& a : weak) sum += a.walk_between;
  CHECK(std::abs(sum) < 1e-9);
}

TEST_CASE("soft-access percent is monotone in the access threshold") {
  // distances fixed; raising the threshold can only add access
  oracle::Rng rng(0x7453ULL);
  HexGrid grid(250.0, {0, 0});
  grid.insert({0, 0});
  grid.cell({0, 0}).population = 100.0;
  for (int it = 0; it < 20; ++it) {
    std::vector<double> dists;
    for (int i = 0; i < 10; ++i) dists.push_back(rng.uniform(0, 1500));
    double t1 = rng.uniform(0, 1500), t2 = t1 + rng.uniform(0, 300);
    auto make = [&](double threshold) {
      std::vector<SamplePointRecord> recs;
      for (double d : dists) {
        SamplePointRecord r = rec_with({0, 0}, 1, 1, {0, 0, 0});
        r.access[0] = binary_access(d, threshold);
        recs.push_back(r);
      }
      return population_percent_with_access(aggregate_to_hex(recs, grid, 3), 0);
    };
    CHECK(make(t1) <= make(t2) + 1e-12);
  }
}

TEST_CASE("city summary assembles percents, means and passthroughs") {
  HexGrid grid(250.0, {0, 0});
  grid.insert({0, 0});
  grid.insert({1, 0});
  grid.cell({0, 0}).population = 100.0;
  grid.cell({1, 0}).population = 300.0;
  std::vector<SamplePointRecord> recs = {rec_with({0, 0}, 4000, 80, {1, 1, 1}),
                                         rec_with({1, 0}, 6000, 120, {0, 1, 1})};
  auto aggs = aggregate_to_hex(recs, grid, 3);
  std::vector<std::string> cats = {"healthy_food_market", "convenience", "pt_any"};
  std::vector<bool> measured = {true, true, false};
  CitySummary s = city_summary("t", "High", 2.5, aggs, cats, measured,
                               ProjectConfig::default_scenarios(), std::nullopt);
  CHECK(s.population == doctest::Approx(400.0));
  CHECK(s.sample_point_count == 2);
  REQUIRE(s.access_percent.size() == 3);
  CHECK(s.access_percent[0].second.has_value());
  CHECK(*s.access_percent[0].second == doctest::Approx(25.0));
  CHECK(!s.access_percent[2].second.has_value());  // unmeasured -> absent
  CHECK(!s.pm25_tonnes.has_value());
  CHECK(s.scenario_percent.size() == 4);
  CHECK(s.mean_pop_density == doctest::Approx(5000.0));
  CHECK(s.wmean_pop_density == doctest::Approx((100.0 * 4000 + 300.0 * 6000) / 400.0));
}
