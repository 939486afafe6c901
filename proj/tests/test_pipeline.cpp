#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cityind/csv.hpp"
#include "cityind/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace cityind;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// our CSVs carry a leading "# schema=..." line
CsvTable read_output_csv(const std::string& path) {
  std::string text = slurp(path);
  size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') pos = text.find('\n', pos) + 1;
  return parse_csv_text(text.substr(pos));
}

}  // namespace

TEST_CASE("toyville analyze writes the full artifact set") {
  std::string dir = fixtures::make_temp_dir("pipe_toyville");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));
  auto written = cmd_analyze(m, "toyville");

  fs::path out = fs::path(m.out_dir) / "toyville";
  CHECK(fs::exists(out / "samples.csv"));
  CHECK(fs::exists(out / "hexes.geojson"));
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(fs::exists(out / "pos.geojson"));
  CHECK(fs::exists(out / "stops_headways.csv"));
  CHECK(written.size() == 5);

  CsvTable summary = read_output_csv((out / "summary.csv").string());
  REQUIRE(summary.rows.size() == 1);
  int c_region = summary.require_col("region", "summary");
  CHECK(summary.rows[0][c_region] == "toyville");

  // schema strings are stamped into the headers
  CHECK(slurp((out / "samples.csv").string()).rfind("# schema=cityind.samples.v1", 0) == 0);
  CHECK(slurp((out / "hexes.geojson").string()).find("cityind.hexes.v1") != std::string::npos);

  // custom categories flow through: merged healthy food + own clinic column
  CsvTable samples = read_output_csv((out / "samples.csv").string());
  CHECK(samples.col("dist_clinic_m") >= 0);
  CHECK(samples.col("access_healthy_food_market") >= 0);
  CHECK(samples.col("dist_pt_30min_m") >= 0);
  CHECK(!samples.rows.empty());

  // stop D has 36 departures -> 20 min headway
  CsvTable stops = read_output_csv((out / "stops_headways.csv").string());
  REQUIRE(stops.rows.size() == 1);
  CHECK(stops.rows[0][stops.require_col("headway_min", "stops")] == "20");
  CHECK(stops.rows[0][stops.require_col("avg_daily_departures", "stops")] == "36");
}

TEST_CASE("rerunning analyze produces byte-identical outputs") {
  std::string dir = fixtures::make_temp_dir("pipe_rerun");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));

  m.out_dir = dir + "/run1";
  cmd_analyze(m, "toyville");
  m.out_dir = dir + "/run2";
  cmd_analyze(m, "toyville");

  for (const char* f :
       {"samples.csv", "hexes.geojson", "summary.csv", "pos.geojson", "stops_headways.csv"}) {
    CAPTURE(f);
    CHECK(slurp(dir + "/run1/toyville/" + f) == slurp(dir + "/run2/toyville/" + f));
  }
}

TEST_CASE("a region without GTFS omits the stops file and leaves frequency fields empty") {
  std::string dir = fixtures::make_temp_dir("pipe_nogtfs");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, false));
  auto written = cmd_analyze(m, "toyville");
  fs::path out = fs::path(m.out_dir) / "toyville";
  CHECK(!fs::exists(out / "stops_headways.csv"));
  CHECK(written.size() == 4);

  CsvTable summary = read_output_csv((out / "summary.csv").string());
  int c30 = summary.require_col("pct_access_pt_30min", "summary");
  int c20 = summary.require_col("pct_access_pt_20min", "summary");
  int cany = summary.require_col("pct_access_pt_any", "summary");
  CHECK(summary.rows[0][c30].empty());
  CHECK(summary.rows[0][c20].empty());
  CHECK(!summary.rows[0][cany].empty());  // OSM stop still measured

  // pm25 was not configured for toyville: passthrough stays empty
  int cpm = summary.require_col("pm25_tonnes", "summary");
  CHECK(summary.rows[0][cpm].empty());
}

TEST_CASE("validate: clean fixture passes, missing file and mixed CRS are fatal") {
  std::string dir = fixtures::make_temp_dir("pipe_validate");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));
  std::ostringstream report;
  CHECK(cmd_validate(m, report) == 0);
  CHECK(report.str().find("FAIL") == std::string::npos);

  // break a file
  fs::remove(fs::path(dir) / "edges.geojson");
  std::ostringstream report2;
  CHECK(cmd_validate(m, report2) == 1);
  CHECK(report2.str().find("[fatal]") != std::string::npos);

  // mixed CRS labels
  std::string dir3 = fixtures::make_temp_dir("pipe_validate_crs");
  RunManifest m3 = RunManifest::load(fixtures::write_toyville(dir3, false));
  {
    std::string text = slurp(dir3 + "/edges.geojson");
    size_t pos = text.find("local-metres");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "other-metres");
    std::ofstream out(dir3 + "/edges.geojson", std::ios::binary);
    out << text;
  }
  std::ostringstream report3;
  CHECK(cmd_validate(m3, report3) == 1);
  CHECK(report3.str().find("mixed CRS") != std::string::npos);
}

TEST_CASE("analyze fails loudly on mixed CRS") {
  std::string dir = fixtures::make_temp_dir("pipe_analyze_crs");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, false));
  {
    std::string text = slurp(dir + "/boundary.geojson");
    size_t pos = text.find("local-metres");
    text.replace(pos, 12, "es:war:here");
    std::ofstream out(dir + "/boundary.geojson", std::ios::binary);
    out << text;
  }
  CHECK_THROWS_AS(cmd_analyze(m, "toyville"), InputError);
}

TEST_CASE("compare pools regions; identical copies get zero-mean z components") {
  std::string dir = fixtures::make_temp_dir("pipe_compare");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));
  RegionSpec copy = m.regions[0];
  copy.name = "twinville";
  m.regions.push_back(copy);

  cmd_analyze(m, "toyville");
  // single analyzed region: compare still runs, scores relative to itself
  auto solo = cmd_compare(m);
  CHECK(fs::exists(solo[0]));
  CHECK(fs::exists(solo[1]));

  cmd_analyze(m, "twinville");
  auto written = cmd_compare(m);
  REQUIRE(written.size() == 2);

  CsvTable cs = read_output_csv(written[1]);
  REQUIRE(cs.rows.size() == 2);
  int czp = cs.require_col("mean_z_pop_density", "compare");
  int czi = cs.require_col("mean_z_intersection_density", "compare");
  int czd = cs.require_col("mean_z_daily_living", "compare");
  for (const auto& row : cs.rows) {
    CHECK(std::abs(std::stod(row[czp].empty() ? "0" : row[czp])) < 1e-9);
    CHECK(std::abs(std::stod(row[czi].empty() ? "0" : row[czi])) < 1e-9);
    CHECK(std::abs(std::stod(row[czd].empty() ? "0" : row[czd])) < 1e-9);
  }

  // hex-level scores must be identical across the two copies
  FeatureFile hexes = read_geojson(written[0]);
  std::map<std::pair<int, int>, double> toy, twin;
  for (const Feature& f : hexes.features) {
    std::pair<int, int> key = {f.properties.value("q", 0), f.properties.value("r", 0)};
    double wb = f.properties.value("walkability_between", 0.0);
    if (f.prop_string("region") == "toyville") toy[key] = wb;
    else twin[key] = wb;
  }
  REQUIRE(!toy.empty());
  REQUIRE(toy.size() == twin.size());
  for (const auto& [k, v] : toy) CHECK(v == doctest::Approx(twin.at(k)).epsilon(1e-12));
}

TEST_CASE("compare without analyzed regions is an input error") {
  std::string dir = fixtures::make_temp_dir("pipe_compare_none");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, false));
  m.out_dir = dir + "/never_ran";
  CHECK_THROWS_AS(cmd_compare(m), InputError);
}

TEST_CASE("gtfs-headways standalone run writes only the stops file") {
  std::string dir = fixtures::make_temp_dir("pipe_gtfs_cmd");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));
  auto written = cmd_gtfs_headways(m, "toyville");
  REQUIRE(written.size() == 1);
  CHECK(fs::exists(written[0]));
  CHECK(!fs::exists(fs::path(m.out_dir) / "toyville" / "samples.csv"));
}

TEST_CASE("cli binary: exit codes and subcommands") {
  const char* bin = std::getenv("CITYIND_BIN");
  if (!bin) {
    MESSAGE("CITYIND_BIN not set; CLI smoke test skipped");
    return;
  }
  std::string dir = fixtures::make_temp_dir("pipe_cli");
  std::string manifest = fixtures::write_toyville(dir, true);

  CHECK(std::system((std::string(bin) + " version > /dev/null").c_str()) == 0);
  CHECK(std::system((std::string(bin) + " validate --config " + manifest + " > /dev/null").c_str()) == 0);
  CHECK(std::system(
            (std::string(bin) + " analyze --config " + manifest + " --region toyville --jobs 2 > /dev/null").c_str()) ==
        0);
  // input error -> exit 1
  int rc = std::system((std::string(bin) + " analyze --config " + manifest +
                        " --region nowhere > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc) == 1);
  int rc2 = std::system((std::string(bin) + " analyze --config /does/not/exist.json "
                         "--region toyville > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc2) == 1);
}

TEST_CASE("component threshold bridging flows through the whole pipeline") {
  std::string dir = fixtures::make_temp_dir("pipe_island");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, false));
  {
    // add a disconnected island street 50 m from the main grid
    auto doc = nlohmann::ordered_json::parse(slurp(dir + "/edges.geojson"));
    doc["features"].push_back(nlohmann::ordered_json::parse(
        R"({"type":"Feature","properties":{"id":99},"geometry":)"
        R"({"type":"LineString","coordinates":[[50,550],[150,550]]}})"));
    std::ofstream out(dir + "/edges.geojson", std::ios::binary);
    out << doc.dump(1);
  }

  // nearest node-to-node gap between the island and the grid is
  // sqrt(50^2 + 50^2) ~ 70.7 m
  AnalyzeResult dropped = analyze_region(m, "toyville");  // largest component only
  m.regions[0].retain_all_components = true;
  m.regions[0].component_connect_threshold_m = 80.0;
  AnalyzeResult bridged = analyze_region(m, "toyville");
  CHECK(bridged.net.edges.size() == dropped.net.edges.size() + 1);
  // the island edge contributes its own sample points (offsets 0,30,60,90)
  CHECK(bridged.records.size() == dropped.records.size() + 4);

  m.regions[0].component_connect_threshold_m = 60.0;  // below the 70.7 m gap
  AnalyzeResult strict = analyze_region(m, "toyville");
  CHECK(strict.net.edges.size() == dropped.net.edges.size());
}

TEST_CASE("destination sets merge custom rows and transit sources by category") {
  std::string dir = fixtures::make_temp_dir("pipe_destsets");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));
  AnalyzeResult res = analyze_region(m, "toyville");

  std::map<std::string, size_t> sizes;
  std::map<std::string, bool> measured;
  for (size_t c = 0; c < res.categories.size(); ++c) {
    sizes[res.categories[c]] = res.destinations[c].points.size();
    measured[res.categories[c]] = res.measured[c];
  }
  // point + polygon features + one custom row
  CHECK(sizes["healthy_food_market"] == 3);
  // OSM bus stop + GTFS stop D
  CHECK(sizes["pt_any"] == 2);
  // GTFS-only sets hold the one frequent stop
  CHECK(sizes["pt_20min"] == 1);
  CHECK(sizes["pt_30min"] == 1);
  // custom-only category appears with its own rows
  CHECK(sizes["clinic"] == 2);
  CHECK(measured["clinic"]);
  CHECK(measured["pt_20min"]);
  CHECK(sizes["pos_any"] > 0);
}

TEST_CASE("multiple feeds namespace stop ids per feed") {
  std::string dir = fixtures::make_temp_dir("pipe_multifeed");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, true));
  m.regions[0].gtfs.push_back(m.regions[0].gtfs[0]);  // same feed twice
  cmd_analyze(m, "toyville");

  CsvTable stops =
      read_output_csv((fs::path(m.out_dir) / "toyville" / "stops_headways.csv").string());
  REQUIRE(stops.rows.size() == 2);
  int cid = stops.require_col("stop_id", "stops");
  CHECK(stops.rows[0][cid] == "f1:D");
  CHECK(stops.rows[1][cid] == "f2:D");
}

TEST_CASE("validate warns when a destination category has no features") {
  std::string dir = fixtures::make_temp_dir("pipe_validate_zero");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, false));
  {
    // strip the bus stop so pt_any classifies nothing
    std::string text = slurp(dir + "/features.geojson");
    size_t pos = text.find("bus_stop");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 8, "cul_desac");
    std::ofstream out(dir + "/features.geojson", std::ios::binary);
    out << text;
  }
  std::ostringstream report;
  CHECK(cmd_validate(m, report) == 0);  // warning, not fatal
  CHECK(report.str().find("[warn] no features classified as pt_any") != std::string::npos);
}

TEST_CASE("pos outputs carry areas and entry points with metrics") {
  std::string dir = fixtures::make_temp_dir("pipe_pos");
  RunManifest m = RunManifest::load(fixtures::write_toyville(dir, false));
  cmd_analyze(m, "toyville");
  FeatureFile pos = read_geojson((fs::path(m.out_dir) / "toyville" / "pos.geojson").string());
  int areas = 0, entries = 0;
  for (const Feature& f : pos.features) {
    if (f.prop_string("kind") == "area") {
      ++areas;
      CHECK(f.properties.contains("roundness"));
      CHECK(f.properties.contains("public_area_ha"));
      CHECK(f.properties.value("area_ha", 0.0) == doctest::Approx(1.0));
      CHECK(f.properties.value("large", true) == false);  // 1 ha park is not large
    } else if (f.prop_string("kind") == "entry") {
      ++entries;
    }
  }
  CHECK(areas == 1);
  // 100x100 park with streets along two sides within 30 m
  CHECK(entries > 0);
}
