#include "cityind/transit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cityind/csv.hpp"
#include "cityind/util.hpp"

namespace cityind {

std::map<std::string, std::vector<int>> service_weekdays(const GtfsFeed& feed,
                                                         const AnalysisWindow& window) {
  if (!valid_date(window.start_date) || !valid_date(window.end_date) ||
      window.start_date > window.end_date)
    throw InputError("transit: invalid analysis window");

  std::map<std::string, std::set<int>> dates;
  for (const GtfsCalendar& c : feed.calendar) {
    int lo = std::max(window.start_date, c.start_date);
    int hi = std::min(window.end_date, c.end_date);
    for (int d = lo; d <= hi && valid_date(d); d = next_date(d)) {
      int wd = weekday_of(d);
      if (wd <= 4 && c.days[wd]) dates[c.service_id].insert(d);
    }
  }
  for (const GtfsCalendarDate& cd : feed.calendar_dates) {
    if (cd.date < window.start_date || cd.date > window.end_date) continue;
    if (cd.exception == 1) {
      if (weekday_of(cd.date) <= 4) dates[cd.service_id].insert(cd.date);
    } else {
      auto it = dates.find(cd.service_id);
      if (it != dates.end()) it->second.erase(cd.date);
    }
  }

  std::map<std::string, std::vector<int>> out;
  for (auto& [sid, ds] : dates)
    if (!ds.empty()) out.emplace(sid, std::vector<int>(ds.begin(), ds.end()));
  return out;
}

int weekday_count(const AnalysisWindow& window) {
  int n = 0;
  for (int d = window.start_date; d <= window.end_date; d = next_date(d))
    if (weekday_of(d) <= 4) ++n;
  return n;
}

std::map<std::string, double> stop_departure_counts(
    const GtfsFeed& feed, const std::map<std::string, std::vector<int>>& service_dates,
    const ClockWindow& clock) {
  int w_start = clock.start_min * 60;
  int w_end = clock.end_min * 60;

  std::map<std::string, std::vector<const GtfsFrequency*>> freq_of_trip;
  for (const GtfsFrequency& f : feed.frequencies) freq_of_trip[f.trip_id].push_back(&f);

  std::map<std::string, int> trip_days;  // counted dates per trip
  for (const GtfsTrip& t : feed.trips) {
    auto it = service_dates.find(t.service_id);
    if (it != service_dates.end()) trip_days[t.trip_id] = static_cast<int>(it->second.size());
  }

  std::map<std::string, double> counts;
  for (const GtfsStopTime& st : feed.stop_times) {
    auto td = trip_days.find(st.trip_id);
    if (td == trip_days.end() || td->second == 0) continue;
    int ndays = td->second;

    auto fq = freq_of_trip.find(st.trip_id);
    if (fq != freq_of_trip.end()) {
      // frequency expansion: one departure per trip start in the window
      double per_day = 0.0;
      for (const GtfsFrequency* f : fq->second) {
        int lo = std::max(f->start_secs, w_start);
        int hi = std::min(f->end_secs, w_end);
        if (hi > lo) per_day += std::floor(static_cast<double>(hi - lo) / f->headway_secs) + 1.0;
      }
      if (per_day > 0.0) counts[st.stop_id] += per_day * ndays;
    } else {
      if (st.departure_secs >= w_start && st.departure_secs < w_end)
        counts[st.stop_id] += static_cast<double>(ndays);
    }
  }
  return counts;
}

std::map<std::string, Point> stop_coordinates(const GtfsFeed& feed,
                                              const std::string& sidecar_csv_path) {
  std::map<std::string, Point> out;
  if (!sidecar_csv_path.empty()) {
    CsvTable t = read_csv_file(sidecar_csv_path);
    int cid = t.require_col("stop_id", sidecar_csv_path);
    int cx = t.require_col("x", sidecar_csv_path);
    int cy = t.require_col("y", sidecar_csv_path);
    for (const auto& row : t.rows) {
      if (static_cast<int>(row.size()) <= std::max({cid, cx, cy})) continue;
      out[trim(row[cid])] = {parse_double_strict(row[cx], sidecar_csv_path + " x"),
                             parse_double_strict(row[cy], sidecar_csv_path + " y")};
    }
    return out;
  }
  // Equirectangular fallback about the mean stop location. This is an
  // approximation, not a projection; callers are warned at the CLI level.
  if (feed.stops.empty()) return out;
  double lat0 = 0.0, lon0 = 0.0;
  for (const GtfsStop& s : feed.stops) {
    lat0 += s.lat;
    lon0 += s.lon;
  }
  lat0 /= static_cast<double>(feed.stops.size());
  lon0 /= static_cast<double>(feed.stops.size());
  constexpr double kEarthR = 6371000.0;
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  double coslat = std::cos(lat0 * kDeg);
  for (const GtfsStop& s : feed.stops)
    out[s.id] = {kEarthR * coslat * (s.lon - lon0) * kDeg, kEarthR * (s.lat - lat0) * kDeg};
  return out;
}

std::vector<StopHeadway> headways(const GtfsFeed& feed,
                                  const std::map<std::string, double>& counts, int n_days,
                                  const ClockWindow& clock,
                                  const std::map<std::string, Point>& stop_xy) {
  if (n_days <= 0) throw InputError("transit: analysis window contains no weekday service days");
  double window_min = static_cast<double>(clock.minutes());

  std::vector<StopHeadway> out;
  out.reserve(feed.stops.size());
  for (const GtfsStop& s : feed.stops) {
    StopHeadway h;
    h.stop_id = s.id;
    auto xy = stop_xy.find(s.id);
    if (xy != stop_xy.end()) h.pos = xy->second;
    auto c = counts.find(s.id);
    double total = c == counts.end() ? 0.0 : c->second;
    h.avg_daily_departures = total / static_cast<double>(n_days);
    if (h.avg_daily_departures > 0.0)
      h.headway_min = window_min / h.avg_daily_departures;
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(),
            [](const StopHeadway& a, const StopHeadway& b) { return a.stop_id < b.stop_id; });
  return out;
}

FrequentStopSets frequent_stop_sets(const std::vector<StopHeadway>& stops,
                                    const std::vector<double>& thresholds_min) {
  FrequentStopSets out;
  for (double t : thresholds_min) out.by_threshold[t];
  for (const StopHeadway& s : stops) {
    out.any.push_back(s.pos);
    for (double t : thresholds_min)
      if (s.headway_min <= t) out.by_threshold[t].push_back(s.pos);
  }
  return out;
}

std::vector<Point> merge_pt_sources(const std::vector<Point>& gtfs_any,
                                    const std::vector<Point>& osm_pt) {
  std::vector<Point> out = gtfs_any;
  out.insert(out.end(), osm_pt.begin(), osm_pt.end());
  return out;
}

GtfsFeed filter_routes(GtfsFeed feed, const std::vector<std::string>& include,
                       const std::vector<std::string>& exclude) {
  if (include.empty() && exclude.empty()) return feed;
  std::set<std::string> inc(include.begin(), include.end());
  std::set<std::string> exc(exclude.begin(), exclude.end());
  std::vector<GtfsTrip> kept;
  std::set<std::string> kept_ids;
  for (GtfsTrip& t : feed.trips) {
    if (!inc.empty() && !inc.count(t.route_id)) continue;
    if (exc.count(t.route_id)) continue;
    kept_ids.insert(t.trip_id);
    kept.push_back(std::move(t));
  }
  feed.trips = std::move(kept);
  std::vector<GtfsStopTime> st;
  for (GtfsStopTime& s : feed.stop_times)
    if (kept_ids.count(s.trip_id)) st.push_back(std::move(s));
  feed.stop_times = std::move(st);
  return feed;
}

std::vector<StopHeadway> analyze_feed(const GtfsFeed& raw, const GtfsFeedSpec& spec,
                                      const ClockWindow& clock) {
  GtfsFeed feed = filter_routes(raw, spec.route_include, spec.route_exclude);
  AnalysisWindow window{spec.start_date, spec.end_date};
  auto dates = service_weekdays(feed, window);
  auto counts = stop_departure_counts(feed, dates, clock);
  auto xy = stop_coordinates(feed, spec.stops_xy_path);
  return headways(feed, counts, weekday_count(window), clock, xy);
}

}  // namespace cityind
