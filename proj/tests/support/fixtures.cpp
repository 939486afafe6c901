#include "support/fixtures.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cityind/gtfs.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

ordered_json point_feature(double x, double y, ordered_json props) {
  return {{"type", "Feature"},
          {"properties", std::move(props)},
          {"geometry", {{"type", "Point"}, {"coordinates", {x, y}}}}};
}

ordered_json rect_feature(double x0, double x1, double y0, double y1, ordered_json props) {
  ordered_json ring = ordered_json::array();
  ring.push_back({x0, y0});
  ring.push_back({x1, y0});
  ring.push_back({x1, y1});
  ring.push_back({x0, y1});
  ring.push_back({x0, y0});
  ordered_json rings = ordered_json::array();
  rings.push_back(ring);
  return {{"type", "Feature"},
          {"properties", std::move(props)},
          {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}}};
}

ordered_json line_feature(double x0, double y0, double x1, double y1, int id) {
  return {{"type", "Feature"},
          {"properties", {{"id", id}}},
          {"geometry", {{"type", "LineString"}, {"coordinates", {{x0, y0}, {x1, y1}}}}}};
}

ordered_json collection(ordered_json features, const std::string& crs) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  if (!crs.empty()) doc["crs"] = {{"type", "name"}, {"properties", {{"name", crs}}}};
  doc["features"] = std::move(features);
  return doc;
}

constexpr const char* kCrs = "local-metres";

}  // namespace

std::string make_temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "cityind_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

GridtownSpec gridtown_spec() {
  GridtownSpec s;
  s.healthy_food = {{350, 350}, {1650, 950}};
  s.convenience = {{750, 1150}, {50, 1950}};
  s.osm_pt = {{1050, 550}};
  s.gtfs_stops = {{250, 250}, {1250, 750}, {1750, 1750}};
  s.gtfs_avg_daily = {36.0, 12.0, 73.0};
  s.gtfs_headways_min = {720.0 / 36.0, 720.0 / 12.0, 720.0 / 73.0};
  return s;
}

std::string write_gridtown(const std::string& dir) {
  GridtownSpec s = gridtown_spec();
  fs::path base(dir);

  {
    ordered_json f = ordered_json::array();
    f.push_back(rect_feature(0, s.extent, 0, s.extent, ordered_json::object()));
    write_file(base / "boundary.geojson", collection(f, kCrs).dump(1));
    write_file(base / "urban.geojson", collection(f, kCrs).dump(1));
  }
  {
    ordered_json f = ordered_json::array();
    int id = 0;
    for (int j = 0; j < s.n; ++j)
      for (int i = 0; i + 1 < s.n; ++i)
        f.push_back(line_feature(i * s.spacing, j * s.spacing, (i + 1) * s.spacing, j * s.spacing, id++));
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j + 1 < s.n; ++j)
        f.push_back(line_feature(i * s.spacing, j * s.spacing, i * s.spacing, (j + 1) * s.spacing, id++));
    write_file(base / "edges.geojson", collection(f, kCrs).dump(1));
  }
  {
    std::string csv = "x,y,cell_size,population\n";
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        csv += std::to_string(125 + 250 * a) + "," + std::to_string(125 + 250 * b) + ",250," +
               std::to_string(static_cast<int>(s.raster_pop)) + "\n";
    write_file(base / "population.csv", csv);
  }
  {
    ordered_json f = ordered_json::array();
    for (const auto& p : s.healthy_food)
      f.push_back(point_feature(p.x, p.y, {{"shop", "supermarket"}}));
    for (const auto& p : s.convenience) f.push_back(point_feature(p.x, p.y, {{"amenity", "fuel"}}));
    for (const auto& p : s.osm_pt) f.push_back(point_feature(p.x, p.y, {{"highway", "bus_stop"}}));
    write_file(base / "features.geojson", collection(f, kCrs).dump(1));
  }
  {
    ordered_json f = ordered_json::array();
    f.push_back(rect_feature(s.park[0], s.park[1], s.park[2], s.park[3], {{"leisure", "park"}}));
    f.push_back(rect_feature(s.building[0], s.building[1], s.building[2], s.building[3],
                             {{"building", "yes"}, {"access", "private"}}));
    write_file(base / "open_space.geojson", collection(f, kCrs).dump(1));
  }
  {
    cityind::GtfsFeed feed;
    feed.stops = {{"A", "Stop A", 0.0, 0.0}, {"B", "Stop B", 0.0, 0.01}, {"C", "Stop C", 0.01, 0.0}};
    feed.routes = {{"r1", 3}, {"r2", 3}, {"r3", 3}};
    feed.calendar.push_back({"wk", {true, true, true, true, true, false, false}, 20190401, 20190630});
    for (int k = 0; k < 36; ++k) {
      std::string trip = "t1_" + std::to_string(k);
      feed.trips.push_back({"r1", "wk", trip});
      feed.stop_times.push_back({trip, (7 * 60 + 20 * k) * 60, "A", 1});
    }
    for (int k = 0; k < 12; ++k) {
      std::string trip = "t2_" + std::to_string(k);
      feed.trips.push_back({"r2", "wk", trip});
      feed.stop_times.push_back({trip, (7 * 60 + 30 + 60 * k) * 60, "B", 1});
    }
    feed.trips.push_back({"r3", "wk", "t3"});
    feed.stop_times.push_back({"t3", 8 * 3600, "C", 1});
    feed.frequencies.push_back({"t3", 7 * 3600, 19 * 3600, 600});
    cityind::write_gtfs_dir(feed, (base / "gtfs").string());

    std::string xy = "stop_id,x,y\n";
    const char* ids[3] = {"A", "B", "C"};
    for (int i = 0; i < 3; ++i)
      xy += std::string(ids[i]) + "," + std::to_string(static_cast<int>(s.gtfs_stops[i].x)) + "," +
            std::to_string(static_cast<int>(s.gtfs_stops[i].y)) + "\n";
    write_file(base / "stops_xy.csv", xy);
  }
  {
    ordered_json m;
    m["config"] = {{"crs_label", kCrs}};
    m["out_dir"] = "out";
    ordered_json region;
    region["name"] = "gridtown";
    region["boundary"] = "boundary.geojson";
    region["urban_layer"] = "urban.geojson";
    region["edges"] = "edges.geojson";
    region["features"] = "features.geojson";
    region["open_space"] = "open_space.geojson";
    region["population"] = "population.csv";
    region["income_group"] = "High";
    region["pm25_tonnes"] = 123.4;
    region["gtfs"] = ordered_json::array(
        {{{"path", "gtfs"}, {"start_date", 20190405}, {"end_date", 20190605}, {"stops_xy", "stops_xy.csv"}}});
    m["regions"] = ordered_json::array({region});
    write_file(base / "manifest.json", m.dump(1));
  }
  return (base / "manifest.json").string();
}

std::string write_toyville(const std::string& dir, bool with_gtfs) {
  fs::path base(dir);

  {
    ordered_json f = ordered_json::array();
    f.push_back(rect_feature(0, 600, 0, 600, ordered_json::object()));
    write_file(base / "boundary.geojson", collection(f, kCrs).dump(1));
    write_file(base / "urban.geojson", collection(f, kCrs).dump(1));
  }
  {
    ordered_json f = ordered_json::array();
    int id = 0;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 2; ++i)
        f.push_back(line_feature(i * 300, j * 300, (i + 1) * 300, j * 300, id++));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        f.push_back(line_feature(i * 300, j * 300, i * 300, (j + 1) * 300, id++));
    write_file(base / "edges.geojson", collection(f, kCrs).dump(1));
  }
  {
    std::string csv = "x,y,cell_size,population\n";
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        csv += std::to_string(75 + 150 * a) + "," + std::to_string(75 + 150 * b) + ",150,50\n";
    write_file(base / "population.csv", csv);
  }
  {
    ordered_json f = ordered_json::array();
    f.push_back(point_feature(310, 290, {{"shop", "supermarket"}}));
    f.push_back(rect_feature(100, 140, 400, 440, {{"shop", "supermarket"}}));
    f.push_back(point_feature(10, 10, {{"amenity", "fuel"}}));
    f.push_back(point_feature(590, 300, {{"highway", "bus_stop"}}));
    write_file(base / "features.geojson", collection(f, kCrs).dump(1));
  }
  {
    // the park straddles the y=300 street so part of its boundary lies
    // within entry-point proximity
    ordered_json f = ordered_json::array();
    f.push_back(rect_feature(150, 250, 280, 380, {{"leisure", "park"}}));
    write_file(base / "open_space.geojson", collection(f, kCrs).dump(1));
  }
  write_file(base / "custom.csv",
             "dest_name,dest_name_full,x,y\n"
             "healthy_food_market,Fresh produce stand,450,450\n"
             "clinic,Community clinic,20,580\n"
             "clinic,Second clinic,580,20\n");
  if (with_gtfs) {
    cityind::GtfsFeed feed;
    feed.stops = {{"D", "Stop D", 0.0, 0.0}};
    feed.routes = {{"r1", 3}};
    feed.calendar.push_back({"wk", {true, true, true, true, true, false, false}, 20190401, 20190630});
    for (int k = 0; k < 36; ++k) {
      std::string trip = "t" + std::to_string(k);
      feed.trips.push_back({"r1", "wk", trip});
      feed.stop_times.push_back({trip, (7 * 60 + 20 * k) * 60, "D", 1});
    }
    cityind::write_gtfs_dir(feed, (base / "gtfs").string());
    write_file(base / "stops_xy.csv", "stop_id,x,y\nD,300,300\n");
  }
  {
    ordered_json m;
    m["config"] = {{"crs_label", kCrs}};
    m["out_dir"] = "out";
    ordered_json region;
    region["name"] = "toyville";
    region["boundary"] = "boundary.geojson";
    region["urban_layer"] = "urban.geojson";
    region["edges"] = "edges.geojson";
    region["features"] = "features.geojson";
    region["open_space"] = "open_space.geojson";
    region["population"] = "population.csv";
    region["custom_destinations"] =
        ordered_json::array({{{"path", "custom.csv"}, {"name_field", "dest_name"},
                              {"full_name_field", "dest_name_full"}, {"x_field", "x"}, {"y_field", "y"}}});
    if (with_gtfs)
      region["gtfs"] = ordered_json::array({{{"path", "gtfs"},
                                             {"start_date", 20190405},
                                             {"end_date", 20190605},
                                             {"stops_xy", "stops_xy.csv"}}});
    m["regions"] = ordered_json::array({region});
    write_file(base / "manifest.json", m.dump(1));
  }
  return (base / "manifest.json").string();
}

void write_stored_zip(const std::string& zip_path,
                      const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  auto put16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };

  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> crcs;
  for (const auto& [name, data] : entries) {
    offsets.push_back(static_cast<std::uint32_t>(out.size()));
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
    crcs.push_back(crc);
    put32(0x04034b50);
    put16(20);  // version needed
    put16(0);   // flags
    put16(0);   // method: stored
    put16(0);   // mod time
    put16(0);   // mod date
    put32(crc);
    put32(static_cast<std::uint32_t>(data.size()));
    put32(static_cast<std::uint32_t>(data.size()));
    put16(static_cast<std::uint16_t>(name.size()));
    put16(0);  // extra len
    out += name;
    out += data;
  }
  std::uint32_t cd_start = static_cast<std::uint32_t>(out.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& [name, data] = entries[i];
    put32(0x02014b50);
    put16(20);
    put16(20);
    put16(0);
    put16(0);
    put16(0);
    put16(0);
    put32(crcs[i]);
    put32(static_cast<std::uint32_t>(data.size()));
    put32(static_cast<std::uint32_t>(data.size()));
    put16(static_cast<std::uint16_t>(name.size()));
    put16(0);
    put16(0);
    put16(0);
    put16(0);
    put32(0);
    put32(offsets[i]);
    out += name;
  }
  std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_start;
  put32(0x06054b50);
  put16(0);
  put16(0);
  put16(static_cast<std::uint16_t>(entries.size()));
  put16(static_cast<std::uint16_t>(entries.size()));
  put32(cd_size);
  put32(cd_start);
  put16(0);

  std::ofstream f(zip_path, std::ios::binary);
  f << out;
}

}  // namespace fixtures
