#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cityind/config.hpp"
#include "cityind/geom.hpp"
#include "cityind/gtfs.hpp"

namespace cityind {

struct AnalysisWindow {
  int start_date = 0;  // yyyymmdd, inclusive
  int end_date = 0;
};

// Weekday (Mon-Fri) dates each service runs inside the window: calendar
// flags intersected with [start,end], plus exception-type-1 weekday
// additions, minus exception-type-2 removals.
std::map<std::string, std::vector<int>> service_weekdays(const GtfsFeed& feed,
                                                         const AnalysisWindow& window);

// Number of Mon-Fri dates in the window (the averaging denominator).
int weekday_count(const AnalysisWindow& window);

// Departures per stop over all counted dates; the clock window is
// half-open [start, end). Frequency-based trips contribute
// floor(overlap / headway) + 1 starts per day per stop-time row.
std::map<std::string, double> stop_departure_counts(
    const GtfsFeed& feed, const std::map<std::string, std::vector<int>>& service_dates,
    const ClockWindow& clock);

struct StopHeadway {
  std::string stop_id;
  Point pos;
  double avg_daily_departures = 0.0;
  double headway_min = std::numeric_limits<double>::infinity();
};

// headway = window minutes / average daily departures (infinite when a
// stop sees none). Throws when n_days == 0.
std::vector<StopHeadway> headways(const GtfsFeed& feed,
                                  const std::map<std::string, double>& counts, int n_days,
                                  const ClockWindow& clock,
                                  const std::map<std::string, Point>& stop_xy);

// Projected stop coordinates: sidecar CSV `stop_id,x,y` when given,
// otherwise an equirectangular approximation about the stops' mean
// lat/lon (documented fallback; no real reprojection happens).
std::map<std::string, Point> stop_coordinates(const GtfsFeed& feed,
                                              const std::string& sidecar_csv_path);

struct FrequentStopSets {
  std::vector<Point> any;
  std::map<double, std::vector<Point>> by_threshold;  // headway <= t minutes
};

FrequentStopSets frequent_stop_sets(const std::vector<StopHeadway>& stops,
                                    const std::vector<double>& thresholds_min);

std::vector<Point> merge_pt_sources(const std::vector<Point>& gtfs_any,
                                    const std::vector<Point>& osm_pt);

// Drops trips whose route_id fails the include/exclude filters
// (per-feed extension point for agency-specific conventions).
GtfsFeed filter_routes(GtfsFeed feed, const std::vector<std::string>& include,
                       const std::vector<std::string>& exclude);

// Whole-feed convenience: returns per-stop headways for one feed spec.
std::vector<StopHeadway> analyze_feed(const GtfsFeed& feed, const GtfsFeedSpec& spec,
                                      const ClockWindow& clock);

}  // namespace cityind
