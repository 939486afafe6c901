#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cityind {

// Thrown for anything wrong with user-supplied input (files, schemas,
// invariant violations). Maps to exit code 1 in the CLI.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unexpected internal failure. Maps to exit code 2.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();
std::optional<LogLevel> parse_log_level(std::string_view name);

void log_error(const std::string& msg);
void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

// Shortest round-trip decimal form (std::to_chars); used for all numeric
// file output so reruns are byte-stable.
std::string fmt_double(double v);

double parse_double_strict(std::string_view s, const std::string& what);
long long parse_int_strict(std::string_view s, const std::string& what);

std::string lower_ascii(std::string_view s);
std::string trim(std::string_view s);

// Tag normalization: ASCII lowercase, with ' ' and '-' mapped to '_'
// so "bus stop", "bus-stop" and "bus_stop" compare equal.
std::string normalize_tag(std::string_view s);

// Runs fn(i) for i in [0, n) across `jobs` worker threads. Callers must
// make fn(i) write only to slot i of preallocated storage; results are
// then independent of scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// --- calendar helpers (dates as yyyymmdd ints) ---

bool valid_date(int yyyymmdd);
// 0 = Monday ... 6 = Sunday
int weekday_of(int yyyymmdd);
int next_date(int yyyymmdd);
// days from a fixed epoch; monotone over valid dates
long long day_number(int yyyymmdd);

}  // namespace cityind
