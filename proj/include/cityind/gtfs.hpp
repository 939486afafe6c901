#pragma once

#include <map>
#include <string>
#include <vector>

namespace cityind {

struct GtfsStop {
  std::string id;
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
};

struct GtfsRoute {
  std::string id;
  int type = -1;
};

struct GtfsTrip {
  std::string route_id;
  std::string service_id;
  std::string trip_id;
};

struct GtfsStopTime {
  std::string trip_id;
  int departure_secs = -1;  // seconds since midnight; >= 24h allowed
  std::string stop_id;
  int sequence = 0;
};

struct GtfsCalendar {
  std::string service_id;
  bool days[7] = {false, false, false, false, false, false, false};  // Mon..Sun
  int start_date = 0;  // yyyymmdd
  int end_date = 0;
};

struct GtfsCalendarDate {
  std::string service_id;
  int date = 0;
  int exception = 0;  // 1 = added, 2 = removed
};

struct GtfsFrequency {
  std::string trip_id;
  int start_secs = 0;
  int end_secs = 0;
  int headway_secs = 0;
};

struct GtfsFeed {
  std::vector<GtfsStop> stops;
  std::vector<GtfsRoute> routes;
  std::vector<GtfsTrip> trips;
  std::vector<GtfsStopTime> stop_times;
  std::vector<GtfsCalendar> calendar;
  std::vector<GtfsCalendarDate> calendar_dates;
  std::vector<GtfsFrequency> frequencies;
  int dropped_rows = 0;  // rows removed for dangling references
};

// "HH:MM:SS" (or "H:MM:SS"), hours may exceed 24; -1 on empty, throws on garbage.
int parse_gtfs_time(const std::string& s, const std::string& context);

// Directory of .txt files or a .zip archive. Requires stops, trips,
// stop_times, and at least one of calendar/calendar_dates. Rows with
// dangling trip/stop references are dropped (counted + warned).
GtfsFeed parse_gtfs(const std::string& path);

// Writes the feed back out as GTFS text files (round-trip support and
// fixture construction).
void write_gtfs_dir(const GtfsFeed& feed, const std::string& dir);

}  // namespace cityind
