#include "cityind/util.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace cityind {

namespace {
LogLevel g_level = LogLevel::Warn;
std::mutex g_log_mutex;

void emit(const char* tag, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "[" << tag << "] " << msg << "\n";
}
}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

std::optional<LogLevel> parse_log_level(std::string_view name) {
  std::string s = lower_ascii(name);
  if (s == "error") return LogLevel::Error;
  if (s == "warn" || s == "warning") return LogLevel::Warn;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return std::nullopt;
}

void log_error(const std::string& msg) { emit("error", msg); }
void log_warn(const std::string& msg) {
  if (g_level >= LogLevel::Warn) emit("warn", msg);
}
void log_info(const std::string& msg) {
  if (g_level >= LogLevel::Info) emit("info", msg);
}
void log_debug(const std::string& msg) {
  if (g_level >= LogLevel::Debug) emit("debug", msg);
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double_strict(std::string_view s, const std::string& what) {
  std::string t = trim(s);
  if (t.empty()) throw InputError(what + ": empty numeric field");
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw InputError(what + ": not a number: '" + t + "'");
  if (!std::isfinite(v)) throw InputError(what + ": non-finite value");
  return v;
}

long long parse_int_strict(std::string_view s, const std::string& what) {
  std::string t = trim(s);
  if (t.empty()) throw InputError(what + ": empty integer field");
  long long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw InputError(what + ": not an integer: '" + t + "'");
  return v;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_tag(std::string_view s) {
  std::string out = lower_ascii(trim(s));
  for (char& c : out)
    if (c == ' ' || c == '-') c = '_';
  return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  int nworkers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(jobs)));
  for (int w = 0; w < nworkers; ++w) {
    workers.emplace_back([&]() {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {
bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }
int days_in_month(int y, int m) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap(y)) return 29;
  return d[m - 1];
}
}  // namespace

bool valid_date(int yyyymmdd) {
  int y = yyyymmdd / 10000, m = (yyyymmdd / 100) % 100, d = yyyymmdd % 100;
  return y >= 1 && m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

long long day_number(int yyyymmdd) {
  // days-from-civil (Hinnant), epoch 1970-01-01
  long long y = yyyymmdd / 10000;
  unsigned m = (yyyymmdd / 100) % 100;
  unsigned d = yyyymmdd % 100;
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

int weekday_of(int yyyymmdd) {
  long long dn = day_number(yyyymmdd);
  // 1970-01-01 was a Thursday (weekday index 3 with Monday=0)
  long long w = (dn + 3) % 7;
  if (w < 0) w += 7;
  return static_cast<int>(w);
}

int next_date(int yyyymmdd) {
  int y = yyyymmdd / 10000, m = (yyyymmdd / 100) % 100, d = yyyymmdd % 100;
  if (d < days_in_month(y, m)) return y * 10000 + m * 100 + (d + 1);
  if (m < 12) return y * 10000 + (m + 1) * 100 + 1;
  return (y + 1) * 10000 + 101;
}

}  // namespace cityind
