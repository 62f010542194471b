#include "congae/od_graph.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <unordered_map>

#include "text.hpp"

namespace congae {
namespace {

namespace chr = std::chrono;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError(name);
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Timestamp Timestamp::from_civil(int year, unsigned month, unsigned day, int hour) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) throw DataError("invalid calendar date");
  if (hour < 0 || hour > 23) throw DataError("hour out of range: " + std::to_string(hour));
  const auto days = chr::sys_days{ymd}.time_since_epoch().count();
  return Timestamp(static_cast<std::int64_t>(days) * 24 + hour);
}

Timestamp Timestamp::parse(std::string_view text) {
  text = text::trim(text);
  auto bad = [&] { return DataError("malformed timestamp '" + std::string(text) + "'"); };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') throw bad();
  const auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) throw bad();
  int hour = 0;
  if (text.size() > 10) {
    if (text[10] != 'T' && text[10] != ' ') throw bad();
    auto rest = text.substr(11);
    const auto hh = rest.substr(0, std::min<std::size_t>(2, rest.size()));
    if (hh.size() != 2 || !all_digits(hh)) throw bad();
    if (rest.size() > 2 && rest[2] != ':') throw bad();
    hour = static_cast<int>(*text::parse_int(hh));
  }
  try {
    return from_civil(static_cast<int>(*text::parse_int(y)),
                      static_cast<unsigned>(*text::parse_int(m)),
                      static_cast<unsigned>(*text::parse_int(d)), hour);
  } catch (const DataError&) {
    throw bad();
  }
}

Timestamp Timestamp::parse_split(std::string_view date, std::string_view hour) {
  const auto day = parse(text::trim(date).substr(0, 10));
  const auto h = text::parse_int(hour);
  if (!h || *h < 0 || *h > 23) throw DataError("malformed hour '" + std::string(hour) + "'");
  return day.plus_hours(*h - day.hour_of_day());
}

int Timestamp::hour_of_day() const { return static_cast<int>(hours_ - floor_div(hours_, 24) * 24); }

int Timestamp::day_of_week() const {
  const chr::sys_days d{chr::days{floor_div(hours_, 24)}};
  return static_cast<int>(chr::weekday{d}.iso_encoding()) - 1;
}

std::string Timestamp::to_string() const {
  const chr::sys_days d{chr::days{floor_div(hours_, 24)}};
  const chr::year_month_day ymd{d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                hour_of_day());
  return buf;
}

TimeContext time_context(Timestamp t) { return {t.hour_of_day(), t.day_of_week()}; }

RecordParse parse_od_records(std::istream& in, const RecordSchema& schema) {
  RecordParse out;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) {
      header = text::split_fields(line, schema.delimiter);
      break;
    }
  }
  if (header.empty()) throw DataError("record file has no header row");
  if (!header.empty() && header[0].size() >= 3 && header[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
    header[0].erase(0, 3);

  const bool split_time = !schema.date_column.empty() && !schema.hour_column.empty();
  const auto c_origin = column_index(header, schema.origin_column);
  const auto c_dest = column_index(header, schema.dest_column);
  const auto c_tt = column_index(header, schema.travel_time_column);
  std::size_t c_ts = 0, c_date = 0, c_hour = 0;
  if (split_time) {
    c_date = column_index(header, schema.date_column);
    c_hour = column_index(header, schema.hour_column);
  } else {
    c_ts = column_index(header, schema.timestamp_column);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto f = text::split_fields(line, schema.delimiter);
      if (f.size() != header.size())
        throw RowError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(f.size()));
      ODRecord r;
      r.origin = f[c_origin];
      r.dest = f[c_dest];
      if (r.origin.empty() || r.dest.empty()) throw RowError(line_no, "empty zone identifier");
      try {
        r.timestamp = split_time ? Timestamp::parse_split(f[c_date], f[c_hour])
                                 : Timestamp::parse(f[c_ts]);
      } catch (const DataError& e) {
        throw RowError(line_no, e.what());
      }
      const auto tt = text::parse_double(f[c_tt]);
      if (!tt || !std::isfinite(*tt)) throw RowError(line_no, "non-numeric travel time '" + f[c_tt] + "'");
      if (*tt <= 0.0) throw RowError(line_no, "non-positive travel time " + f[c_tt]);
      r.travel_time = *tt;
      out.records.push_back(std::move(r));
    } catch (const RowError& e) {
      if (!schema.lenient) throw;
      out.errors.push_back(e);
    }
  }
  return out;
}

std::vector<ZoneFeatures> read_zone_features(std::istream& in, char delimiter) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) {
      header = text::split_fields(line, delimiter);
      break;
    }
  }
  if (header.empty()) throw DataError("zone file has no header row");
  const std::size_t cols[5] = {column_index(header, "zone_id"), column_index(header, "min_lat"),
                               column_index(header, "min_lon"), column_index(header, "max_lat"),
                               column_index(header, "max_lon")};
  std::vector<ZoneFeatures> out;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto f = text::split_fields(line, delimiter);
    if (f.size() != header.size()) throw RowError(line_no, "wrong field count");
    ZoneFeatures z;
    z.zone_id = f[cols[0]];
    if (z.zone_id.empty()) throw RowError(line_no, "empty zone identifier");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      auto d = text::parse_double(f[cols[k + 1]]);
      if (!d || !std::isfinite(*d)) throw RowError(line_no, "non-numeric coordinate");
      v[k] = *d;
    }
    z.min_lat = v[0];
    z.min_lon = v[1];
    z.max_lat = v[2];
    z.max_lon = v[3];
    if (z.min_lat > z.max_lat || z.min_lon > z.max_lon)
      throw RowError(line_no, "bounding box minimum exceeds maximum");
    if (!seen.insert(z.zone_id).second) throw RowError(line_no, "duplicate zone '" + z.zone_id + "'");
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<ZoneFeatures> prepare_zones(std::span<const ZoneFeatures> all,
                                        std::span<const std::string> zone_ids) {
  std::unordered_map<std::string, const ZoneFeatures*> by_id;
  for (const auto& z : all) by_id[z.zone_id] = &z;
  std::vector<ZoneFeatures> out;
  for (const auto& id : zone_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("zone '" + id + "' has no feature row");
    out.push_back(*it->second);
  }
  auto raw = [](const ZoneFeatures& z, int k) {
    switch (k) {
      case 0: return z.min_lat;
      case 1: return z.min_lon;
      case 2: return z.max_lat;
      default: return z.max_lon;
    }
  };
  for (int k = 0; k < 4; ++k) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& z : out) {
      lo = std::min(lo, raw(z, k));
      hi = std::max(hi, raw(z, k));
    }
    for (auto& z : out) z.scaled[k] = hi > lo ? (raw(z, k) - lo) / (hi - lo) : 0.0;
  }
  return out;
}

std::vector<std::string> select_top_zones(std::span<const ODRecord> records, std::size_t k) {
  if (k == 0) throw ConfigError("zone count k must be at least 1");
  if (records.empty()) throw DataError("no records to select zones from");
  struct Stats {
    std::set<std::string> counterparts;
    std::size_t records = 0;
  };
  std::map<std::string, Stats> zones;
  for (const auto& r : records) {
    auto& o = zones[r.origin];
    ++o.records;
    if (r.origin != r.dest) {
      auto& d = zones[r.dest];
      ++d.records;
      o.counterparts.insert(r.dest);
      d.counterparts.insert(r.origin);
    }
  }
  if (zones.size() < k)
    throw DataError("requested " + std::to_string(k) + " zones but only " +
                    std::to_string(zones.size()) + " are available");
  std::vector<const std::pair<const std::string, Stats>*> ranked;
  for (const auto& z : zones) ranked.push_back(&z);
  std::sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
    if (a->second.counterparts.size() != b->second.counterparts.size())
      return a->second.counterparts.size() > b->second.counterparts.size();
    if (a->second.records != b->second.records) return a->second.records > b->second.records;
    return a->first < b->first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i]->first);
  std::sort(out.begin(), out.end());
  return out;
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw NumericError("percentile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

WeightScaler fit_weight_scaler(std::span<const double> travel_times) {
  std::vector<double> inv;
  inv.reserve(travel_times.size());
  for (double t : travel_times) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("travel time must be positive");
    inv.push_back(1.0 / t);
  }
  if (inv.size() < 2) throw NumericError("degenerate weight scaler: fewer than 2 travel times");
  std::sort(inv.begin(), inv.end());
  WeightScaler s{percentile_sorted(inv, 0.01), percentile_sorted(inv, 0.99)};
  if (!(s.inv_min < s.inv_max))
    throw NumericError("degenerate weight scaler: travel-time percentiles coincide");
  return s;
}

WeightScaler fit_weight_scaler(std::span<const ODRecord> train_records) {
  std::vector<double> tt;
  tt.reserve(train_records.size());
  for (const auto& r : train_records) tt.push_back(r.travel_time);
  return fit_weight_scaler(tt);
}

double WeightScaler::scale(double travel_time) const {
  if (!(travel_time > 0.0)) throw DomainError("travel time must be positive");
  const double w = (1.0 / travel_time - inv_min) / (inv_max - inv_min);
  return std::clamp(w, 0.0, 1.0);
}

double WeightScaler::travel_time_for(double weight) const {
  return 1.0 / (inv_min + weight * (inv_max - inv_min));
}

double scale_weight(const WeightScaler& scaler, double travel_time) {
  return scaler.scale(travel_time);
}

void ODSnapshot::canonicalize() {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.dest != b.dest ? a.dest < b.dest : a.origin < b.origin;
  });
}

void ODSnapshot::validate() const {
  if (!context.valid()) throw DataError("snapshot " + timestamp.to_string() + ": invalid time context");
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& e : edges) {
    if (e.origin >= node_count || e.dest >= node_count)
      throw DataError("snapshot " + timestamp.to_string() + ": node index out of range");
    if (e.origin == e.dest) throw DataError("snapshot " + timestamp.to_string() + ": self-loop");
    if (!(e.weight >= 0.0 && e.weight <= 1.0))
      throw DataError("snapshot " + timestamp.to_string() + ": weight outside [0, 1]");
    if (!seen.insert({e.origin, e.dest}).second)
      throw DataError("snapshot " + timestamp.to_string() + ": duplicate edge");
  }
}

Matrix Dataset::node_features() const {
  Matrix x(zones.size(), 4);
  for (std::size_t i = 0; i < zones.size(); ++i)
    for (std::size_t k = 0; k < 4; ++k) x(i, k) = zones[i].scaled[k];
  return x;
}

std::size_t Dataset::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : snapshots) n += s.edges.size();
  return n;
}

void Dataset::validate() const {
  for (std::size_t t = 0; t < snapshots.size(); ++t) {
    if (snapshots[t].node_count != zones.size())
      throw DataError("snapshot node count does not match zone count");
    if (t > 0 && !(snapshots[t - 1].timestamp < snapshots[t].timestamp))
      throw DataError("snapshot timestamps are not strictly increasing");
    snapshots[t].validate();
  }
}

Dataset build_snapshots(std::span<const ODRecord> records, std::vector<ZoneFeatures> zones,
                        const WeightScaler& scaler) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < zones.size(); ++i) index[zones[i].zone_id] = i;

  // (timestamp, dest, origin) -> travel times; sorted before averaging so the
  // result does not depend on record order.
  std::map<std::tuple<std::int64_t, std::uint32_t, std::uint32_t>, std::vector<double>> cells;
  for (const auto& r : records) {
    auto o = index.find(r.origin);
    auto d = index.find(r.dest);
    if (o == index.end() || d == index.end() || o->second == d->second) continue;
    cells[{r.timestamp.hours_since_epoch(), d->second, o->second}].push_back(r.travel_time);
  }

  Dataset ds;
  ds.zones = std::move(zones);
  ds.scaler = scaler;
  for (auto& [key, values] : cells) {
    const auto [hours, dest, origin] = key;
    if (ds.snapshots.empty() || ds.snapshots.back().timestamp.hours_since_epoch() != hours) {
      ODSnapshot s;
      s.node_count = ds.zones.size();
      s.timestamp = Timestamp::from_hours(hours);
      s.context = time_context(s.timestamp);
      ds.snapshots.push_back(std::move(s));
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double tau = sum / static_cast<double>(values.size());
    ds.snapshots.back().edges.push_back({origin, dest, scaler.scale(tau), tau});
  }
  return ds;
}

}  // namespace congae
