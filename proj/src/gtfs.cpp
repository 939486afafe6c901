#include "cityind/gtfs.hpp"

#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cityind/csv.hpp"
#include "cityind/util.hpp"

namespace cityind {

namespace fs = std::filesystem;

int parse_gtfs_time(const std::string& s, const std::string& ctx) {
  std::string t = trim(s);
  if (t.empty()) return -1;
  int h = 0, m = 0, sec = 0;
  size_t c1 = t.find(':');
  size_t c2 = c1 == std::string::npos ? std::string::npos : t.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw InputError(ctx + ": bad time '" + t + "'");
  h = static_cast<int>(parse_int_strict(t.substr(0, c1), ctx + " hours"));
  m = static_cast<int>(parse_int_strict(t.substr(c1 + 1, c2 - c1 - 1), ctx + " minutes"));
  sec = static_cast<int>(parse_int_strict(t.substr(c2 + 1), ctx + " seconds"));
  if (h < 0 || m < 0 || m > 59 || sec < 0 || sec > 59)
    throw InputError(ctx + ": time out of range '" + t + "'");
  return h * 3600 + m * 60 + sec;
}

namespace {

// --- minimal zip reader (central directory + stored/deflate entries) ---

std::uint32_t rd32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t rd16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::string inflate_raw(const unsigned char* data, size_t comp_size, size_t uncomp_size,
                        const std::string& ctx) {
  std::string out;
  out.resize(uncomp_size);
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw InternalError(ctx + ": inflateInit failed");
  zs.next_in = const_cast<unsigned char*>(data);
  zs.avail_in = static_cast<uInt>(comp_size);
  zs.next_out = reinterpret_cast<unsigned char*>(out.data());
  zs.avail_out = static_cast<uInt>(uncomp_size);
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw InputError(ctx + ": corrupt deflate stream");
  return out;
}

std::map<std::string, std::string> read_zip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open zip: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string buf = ss.str();
  const unsigned char* b = reinterpret_cast<const unsigned char*>(buf.data());
  size_t n = buf.size();
  if (n < 22) throw InputError(path + ": not a zip archive");

  // end-of-central-directory: scan backwards for PK\5\6
  size_t eocd = std::string::npos;
  for (size_t i = n - 22;; --i) {
    if (b[i] == 0x50 && b[i + 1] == 0x4b && b[i + 2] == 0x05 && b[i + 3] == 0x06) {
      eocd = i;
      break;
    }
    if (i == 0 || n - i > 22 + 65535) break;
  }
  if (eocd == std::string::npos) throw InputError(path + ": zip end record not found");
  std::uint16_t count = rd16(b + eocd + 10);
  std::uint32_t cd_ofs = rd32(b + eocd + 16);

  std::map<std::string, std::string> files;
  size_t p = cd_ofs;
  for (int i = 0; i < count; ++i) {
    if (p + 46 > n || rd32(b + p) != 0x02014b50)
      throw InputError(path + ": corrupt zip central directory");
    std::uint16_t method = rd16(b + p + 10);
    std::uint32_t comp_size = rd32(b + p + 20);
    std::uint32_t uncomp_size = rd32(b + p + 24);
    std::uint16_t name_len = rd16(b + p + 28);
    std::uint16_t extra_len = rd16(b + p + 30);
    std::uint16_t comment_len = rd16(b + p + 32);
    std::uint32_t local_ofs = rd32(b + p + 42);
    std::string name(buf, p + 46, name_len);
    p += 46 + name_len + extra_len + comment_len;

    if (!name.empty() && name.back() == '/') continue;  // directory entry
    if (local_ofs + 30 > n || rd32(b + local_ofs) != 0x04034b50)
      throw InputError(path + ": corrupt zip local header for " + name);
    std::uint16_t lname = rd16(b + local_ofs + 26);
    std::uint16_t lextra = rd16(b + local_ofs + 28);
    size_t data_ofs = local_ofs + 30 + lname + lextra;
    if (data_ofs + comp_size > n) throw InputError(path + ": truncated zip entry " + name);

    // strip any leading folder (feeds are often zipped inside one)
    std::string base = name;
    size_t slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);

    if (method == 0) {
      files[base] = buf.substr(data_ofs, comp_size);
    } else if (method == 8) {
      files[base] = inflate_raw(b + data_ofs, comp_size, uncomp_size, path + ":" + name);
    } else {
      throw InputError(path + ": unsupported zip compression method for " + name);
    }
  }
  return files;
}

std::map<std::string, std::string> read_feed_files(const std::string& path) {
  if (fs::is_directory(path)) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      if (entry.path().extension() != ".txt") continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      files[entry.path().filename().string()] = ss.str();
    }
    return files;
  }
  return read_zip(path);
}

std::string cell(const std::vector<std::string>& row, int col) {
  if (col < 0 || col >= static_cast<int>(row.size())) return "";
  return trim(row[col]);
}

}  // namespace

GtfsFeed parse_gtfs(const std::string& path) {
  auto files = read_feed_files(path);
  auto need = [&](const char* name) -> const std::string& {
    auto it = files.find(name);
    if (it == files.end()) throw InputError(path + ": missing required GTFS file " + name);
    return it->second;
  };

  GtfsFeed feed;
  {
    CsvTable t = parse_csv_text(need("stops.txt"));
    int cid = t.require_col("stop_id", "stops.txt");
    int cname = t.col("stop_name");
    int clat = t.col("stop_lat");
    int clon = t.col("stop_lon");
    for (const auto& row : t.rows) {
      GtfsStop s;
      s.id = cell(row, cid);
      if (s.id.empty()) continue;
      s.name = cell(row, cname);
      std::string lat = cell(row, clat), lon = cell(row, clon);
      if (!lat.empty()) s.lat = parse_double_strict(lat, "stops.txt stop_lat");
      if (!lon.empty()) s.lon = parse_double_strict(lon, "stops.txt stop_lon");
      feed.stops.push_back(std::move(s));
    }
  }
  if (files.count("routes.txt")) {
    CsvTable t = parse_csv_text(files["routes.txt"]);
    int cid = t.require_col("route_id", "routes.txt");
    int ctype = t.col("route_type");
    for (const auto& row : t.rows) {
      GtfsRoute r;
      r.id = cell(row, cid);
      std::string ty = cell(row, ctype);
      if (!ty.empty()) r.type = static_cast<int>(parse_int_strict(ty, "routes.txt route_type"));
      feed.routes.push_back(std::move(r));
    }
  }
  {
    CsvTable t = parse_csv_text(need("trips.txt"));
    int crid = t.require_col("route_id", "trips.txt");
    int csid = t.require_col("service_id", "trips.txt");
    int ctid = t.require_col("trip_id", "trips.txt");
    for (const auto& row : t.rows) {
      GtfsTrip tr;
      tr.route_id = cell(row, crid);
      tr.service_id = cell(row, csid);
      tr.trip_id = cell(row, ctid);
      if (tr.trip_id.empty()) continue;
      feed.trips.push_back(std::move(tr));
    }
  }
  bool have_calendar = files.count("calendar.txt") > 0;
  bool have_calendar_dates = files.count("calendar_dates.txt") > 0;
  if (!have_calendar && !have_calendar_dates)
    throw InputError(path + ": needs calendar.txt or calendar_dates.txt");
  if (have_calendar) {
    CsvTable t = parse_csv_text(files["calendar.txt"]);
    int csid = t.require_col("service_id", "calendar.txt");
    const char* daycols[7] = {"monday", "tuesday", "wednesday", "thursday",
                              "friday", "saturday", "sunday"};
    int cday[7];
    for (int i = 0; i < 7; ++i) cday[i] = t.require_col(daycols[i], "calendar.txt");
    int cs = t.require_col("start_date", "calendar.txt");
    int ce = t.require_col("end_date", "calendar.txt");
    for (const auto& row : t.rows) {
      GtfsCalendar c;
      c.service_id = cell(row, csid);
      for (int i = 0; i < 7; ++i) c.days[i] = cell(row, cday[i]) == "1";
      c.start_date = static_cast<int>(parse_int_strict(cell(row, cs), "calendar.txt start_date"));
      c.end_date = static_cast<int>(parse_int_strict(cell(row, ce), "calendar.txt end_date"));
      if (!valid_date(c.start_date) || !valid_date(c.end_date))
        throw InputError("calendar.txt: invalid date for service " + c.service_id);
      feed.calendar.push_back(std::move(c));
    }
  }
  if (have_calendar_dates) {
    CsvTable t = parse_csv_text(files["calendar_dates.txt"]);
    int csid = t.require_col("service_id", "calendar_dates.txt");
    int cdate = t.require_col("date", "calendar_dates.txt");
    int cex = t.require_col("exception_type", "calendar_dates.txt");
    for (const auto& row : t.rows) {
      GtfsCalendarDate c;
      c.service_id = cell(row, csid);
      c.date = static_cast<int>(parse_int_strict(cell(row, cdate), "calendar_dates.txt date"));
      c.exception = static_cast<int>(parse_int_strict(cell(row, cex), "calendar_dates.txt exception_type"));
      if (!valid_date(c.date)) throw InputError("calendar_dates.txt: invalid date");
      if (c.exception != 1 && c.exception != 2)
        throw InputError("calendar_dates.txt: exception_type must be 1 or 2");
      feed.calendar_dates.push_back(std::move(c));
    }
  }
  if (files.count("frequencies.txt")) {
    CsvTable t = parse_csv_text(files["frequencies.txt"]);
    int ctid = t.require_col("trip_id", "frequencies.txt");
    int cs = t.require_col("start_time", "frequencies.txt");
    int ce = t.require_col("end_time", "frequencies.txt");
    int ch = t.require_col("headway_secs", "frequencies.txt");
    for (const auto& row : t.rows) {
      GtfsFrequency f;
      f.trip_id = cell(row, ctid);
      f.start_secs = parse_gtfs_time(cell(row, cs), "frequencies.txt start_time");
      f.end_secs = parse_gtfs_time(cell(row, ce), "frequencies.txt end_time");
      f.headway_secs = static_cast<int>(parse_int_strict(cell(row, ch), "frequencies.txt headway_secs"));
      if (f.headway_secs <= 0) throw InputError("frequencies.txt: headway_secs must be positive");
      feed.frequencies.push_back(std::move(f));
    }
  }
  {
    std::set<std::string> trip_ids, stop_ids;
    for (const auto& t : feed.trips) trip_ids.insert(t.trip_id);
    for (const auto& s : feed.stops) stop_ids.insert(s.id);
    CsvTable t = parse_csv_text(need("stop_times.txt"));
    int ctid = t.require_col("trip_id", "stop_times.txt");
    int cdep = t.col("departure_time");
    int carr = t.col("arrival_time");
    if (cdep < 0 && carr < 0) throw InputError("stop_times.txt: missing departure_time");
    int csid = t.require_col("stop_id", "stop_times.txt");
    int cseq = t.col("stop_sequence");
    for (const auto& row : t.rows) {
      GtfsStopTime st;
      st.trip_id = cell(row, ctid);
      st.stop_id = cell(row, csid);
      std::string dep = cell(row, cdep >= 0 ? cdep : carr);
      if (dep.empty() && cdep >= 0 && carr >= 0) dep = cell(row, carr);
      st.departure_secs = parse_gtfs_time(dep, "stop_times.txt departure_time");
      std::string seq = cell(row, cseq);
      if (!seq.empty()) st.sequence = static_cast<int>(parse_int_strict(seq, "stop_times.txt stop_sequence"));
      if (!trip_ids.count(st.trip_id) || !stop_ids.count(st.stop_id)) {
        feed.dropped_rows += 1;
        continue;
      }
      feed.stop_times.push_back(std::move(st));
    }
    if (feed.dropped_rows > 0)
      log_warn(path + ": dropped " + std::to_string(feed.dropped_rows) +
               " stop_times row(s) with dangling references");
  }
  return feed;
}

void write_gtfs_dir(const GtfsFeed& feed, const std::string& dir) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw InputError(std::string("cannot write ") + name + " in " + dir);
    return out;
  };
  auto fmt_time = [](int secs) {
    if (secs < 0) return std::string();
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", secs / 3600, (secs / 60) % 60, secs % 60);
    return std::string(buf);
  };
  {
    auto out = open("stops.txt");
    out << "stop_id,stop_name,stop_lat,stop_lon\n";
    for (const auto& s : feed.stops)
      out << csv_escape(s.id) << "," << csv_escape(s.name) << "," << fmt_double(s.lat) << ","
          << fmt_double(s.lon) << "\n";
  }
  {
    auto out = open("routes.txt");
    out << "route_id,route_type\n";
    for (const auto& r : feed.routes)
      out << csv_escape(r.id) << "," << (r.type >= 0 ? std::to_string(r.type) : "") << "\n";
  }
  {
    auto out = open("trips.txt");
    out << "route_id,service_id,trip_id\n";
    for (const auto& t : feed.trips)
      out << csv_escape(t.route_id) << "," << csv_escape(t.service_id) << ","
          << csv_escape(t.trip_id) << "\n";
  }
  {
    auto out = open("stop_times.txt");
    out << "trip_id,departure_time,stop_id,stop_sequence\n";
    for (const auto& st : feed.stop_times)
      out << csv_escape(st.trip_id) << "," << fmt_time(st.departure_secs) << ","
          << csv_escape(st.stop_id) << "," << st.sequence << "\n";
  }
  if (!feed.calendar.empty()) {
    auto out = open("calendar.txt");
    out << "service_id,monday,tuesday,wednesday,thursday,friday,saturday,sunday,start_date,end_date\n";
    for (const auto& c : feed.calendar) {
      out << csv_escape(c.service_id);
      for (int i = 0; i < 7; ++i) out << "," << (c.days[i] ? "1" : "0");
      out << "," << c.start_date << "," << c.end_date << "\n";
    }
  }
  if (!feed.calendar_dates.empty()) {
    auto out = open("calendar_dates.txt");
    out << "service_id,date,exception_type\n";
    for (const auto& c : feed.calendar_dates)
      out << csv_escape(c.service_id) << "," << c.date << "," << c.exception << "\n";
  }
  if (!feed.frequencies.empty()) {
    auto out = open("frequencies.txt");
    out << "trip_id,start_time,end_time,headway_secs\n";
    for (const auto& f : feed.frequencies)
      out << csv_escape(f.trip_id) << "," << fmt_time(f.start_secs) << "," << fmt_time(f.end_secs)
          << "," << f.headway_secs << "\n";
  }
}

}  // namespace cityind
