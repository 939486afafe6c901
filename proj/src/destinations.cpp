#include "cityind/destinations.hpp"

#include <algorithm>

#include "cityind/csv.hpp"
#include "cityind/util.hpp"

namespace cityind {

namespace {

struct TagRule {
  const char* key;
  const char* value;
  const char* category;
};

// key-value rows per category; compared after normalize_tag on both sides
const TagRule kRules[] = {
    {"shop", "supermarket", kHealthyFood},
    {"supermarket", "supermarket", kHealthyFood},
    {"amenity", "supermarket", kHealthyFood},
    {"building", "supermarket", kHealthyFood},
    {"shop", "grocery", kHealthyFood},
    {"shop", "bakery", kHealthyFood},
    {"shop", "pastry", kHealthyFood},
    {"name", "Tortillería", kHealthyFood},
    {"shop", "butcher", kHealthyFood},
    {"shop", "seafood", kHealthyFood},
    {"shop", "fishmonger", kHealthyFood},
    {"shop", "greengrocer", kHealthyFood},
    {"shop", "fruit", kHealthyFood},
    {"shop", "fruits", kHealthyFood},
    {"shop", "vegetables", kHealthyFood},
    {"shop", "deli", kHealthyFood},
    {"shop", "cheese", kHealthyFood},
    {"amenity", "marketplace", kHealthyFood},
    {"amenity", "market", kHealthyFood},
    {"amenity", "market place", kHealthyFood},
    {"amenity", "public market", kHealthyFood},
    {"shop", "marketplace", kHealthyFood},
    {"shop", "market", kHealthyFood},

    {"shop", "convenience", kConvenience},
    {"amenity", "fuel", kConvenience},
    {"shop", "kiosk", kConvenience},
    {"shop", "newsagent", kConvenience},
    {"shop", "newsagency", kConvenience},
    {"amenity", "newsagency", kConvenience},

    {"public transport", "platform", kPtAny},
    {"public transport", "stop_position", kPtAny},
    {"highway", "bus stop", kPtAny},
    {"highway", "platform", kPtAny},
    {"railway", "platform", kPtAny},
    {"public transport", "station", kPtAny},
    {"amenity", "ferry terminal", kPtAny},
    {"railway", "tram stop", kPtAny},
    {"railway", "stop", kPtAny},
};

}  // namespace

std::vector<std::string> classify(const TagMap& tags) {
  TagMap norm;
  for (const auto& [k, v] : tags) norm[normalize_tag(k)] = normalize_tag(v);

  std::vector<std::string> out;
  auto add = [&](const char* cat) {
    if (std::find(out.begin(), out.end(), cat) == out.end()) out.emplace_back(cat);
  };
  for (const TagRule& rule : kRules) {
    auto it = norm.find(normalize_tag(rule.key));
    if (it != norm.end() && it->second == normalize_tag(rule.value)) add(rule.category);
  }
  return out;
}

std::optional<Point> feature_to_point(const Feature& f, std::string* warning) {
  switch (f.kind) {
    case GeomKind::Point:
      return f.point;
    case GeomKind::Polygon:
    case GeomKind::MultiPolygon: {
      if (area(f.mpoly) <= 0.0) {
        if (warning) *warning = "zero-area polygon; using first vertex";
        for (const Polygon& p : f.mpoly.polys)
          if (!p.outer.empty()) return p.outer.front();
        return std::nullopt;
      }
      return centroid(f.mpoly);
    }
    default:
      if (warning) *warning = "unsupported geometry for a destination feature";
      return std::nullopt;
  }
}

std::vector<DestinationSet> load_custom_destinations(const std::string& csv_path,
                                                     const std::string& name_field,
                                                     const std::string& full_name_field,
                                                     const std::string& x_field,
                                                     const std::string& y_field) {
  CsvTable t = read_csv_file(csv_path);
  int cn = t.require_col(name_field, csv_path);
  (void)t.require_col(full_name_field, csv_path);  // presence check only
  int cx = t.require_col(x_field, csv_path);
  int cy = t.require_col(y_field, csv_path);

  std::map<std::string, DestinationSet> by_name;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    std::string where = csv_path + " row " + std::to_string(i + 2);
    if (static_cast<int>(row.size()) <= std::max({cn, cx, cy}))
      throw InputError(where + ": too few columns");
    std::string name = normalize_tag(row[cn]);
    if (name.empty()) throw InputError(where + ": empty " + name_field);
    Point p{parse_double_strict(row[cx], where + " " + x_field),
            parse_double_strict(row[cy], where + " " + y_field)};
    auto [it, fresh] = by_name.try_emplace(name);
    if (fresh) it->second.category = name;
    it->second.points.push_back(p);
  }

  std::vector<DestinationSet> out;
  for (auto& [name, set] : by_name) out.push_back(std::move(set));
  return out;
}

void clip_to_region(DestinationSet& set, const MultiPolygon& region) {
  std::vector<Point> kept;
  kept.reserve(set.points.size());
  for (const Point& p : set.points) {
    if (contains(region, p))
      kept.push_back(p);
    else
      ++set.dropped_outside;
  }
  set.points = std::move(kept);
}

}  // namespace cityind
