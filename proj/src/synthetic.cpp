#include "congae/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "congae/error.hpp"
#include "congae/rng.hpp"
#include "text.hpp"

namespace congae {
namespace {

constexpr double kCellLat = 0.01;
constexpr double kCellLon = 0.012;

struct Position {
  double x, y;
};

Position position(const SyntheticCityConfig& cfg, int zone) {
  return {static_cast<double>(zone % cfg.zones_x), static_cast<double>(zone / cfg.zones_x)};
}

double distance_to_centre(const SyntheticCityConfig& cfg, int zone) {
  const auto p = position(cfg, zone);
  return std::hypot(p.x - (cfg.zones_x - 1) / 2.0, p.y - (cfg.zones_y - 1) / 2.0);
}

// Fixed per-pair detour factor.
double pair_factor(const SyntheticCityConfig& cfg, int origin, int dest) {
  RngStream r(mix_seed(cfg.seed, {7, static_cast<std::uint64_t>(origin), static_cast<std::uint64_t>(dest)}));
  return 1.0 + cfg.detour_spread * (r.uniform() - 0.5);
}

// 0 outside rush hours; within them two bumps peaking at 08:00 and 17:00.
double rush_intensity(int hour) {
  if (!is_rush_hour(hour)) return 0.0;
  const double m = std::exp(-(hour - 8) * (hour - 8) / 4.0);
  const double a = std::exp(-(hour - 17) * (hour - 17) / 4.0);
  return 0.6 + 0.4 * std::max(m, a);
}

double off_peak_factor(int hour) {
  if (hour <= 5) return 0.85;
  if (hour == 6) return 0.95;
  return 1.0 - 0.03 * (hour - 19);
}

}  // namespace

bool is_rush_hour(int hour) { return hour >= 7 && hour <= 18; }

double synthetic_mean_travel_time(const SyntheticCityConfig& cfg, int origin, int dest, TimeContext ctx) {
  const auto po = position(cfg, origin);
  const auto pd = position(cfg, dest);
  const double km = std::hypot(po.x - pd.x, 1.1 * (po.y - pd.y));
  double tau = cfg.base_seconds + cfg.seconds_per_km * km * pair_factor(cfg, origin, dest);

  const bool weekday = ctx.dow < 5;
  if (is_rush_hour(ctx.hour)) {
    const double intensity = rush_intensity(ctx.hour);
    const double peak = weekday ? cfg.rush_weekday : cfg.rush_weekend;
    tau *= 1.0 + (peak - 1.0) * intensity;
    const bool inbound = distance_to_centre(cfg, dest) < distance_to_centre(cfg, origin);
    const bool morning = ctx.hour <= 12;
    if (inbound == morning) tau *= 1.0 + cfg.commute_extra * intensity * (weekday ? 1.0 : 0.3);
  } else {
    tau *= off_peak_factor(ctx.hour);
  }
  const double phase = static_cast<double>((dest * 7) % 24);
  tau *= 1.0 + cfg.hotspot * std::cos(2.0 * std::numbers::pi * (ctx.hour - phase) / 24.0);
  return tau;
}

double roadworks_factor(const SyntheticCityConfig& cfg, int origin, int dest, int week) {
  double f = 1.0;
  for (const auto& w : cfg.roadworks) {
    if (week < w.start_week || week >= w.end_week) continue;
    const auto in = [&](int z) { return std::find(w.zones.begin(), w.zones.end(), z) != w.zones.end(); };
    if (in(origin) || in(dest)) f *= 1.0 + w.slowdown;
  }
  return f;
}

SyntheticCity generate_city(const SyntheticCityConfig& cfg) {
  if (cfg.zones_x < 1 || cfg.zones_y < 1 || cfg.zones_x * cfg.zones_y < 2)
    throw ConfigError("synthetic city needs at least two zones");
  if (cfg.weeks < 1) throw ConfigError("synthetic city needs at least one week");
  const int n = cfg.zones_x * cfg.zones_y;

  SyntheticCity city;
  for (int z = 0; z < n; ++z) {
    const auto p = position(cfg, z);
    ZoneFeatures f;
    f.zone_id = (z < 10 ? "Z0" : "Z") + std::to_string(z);
    f.min_lat = 40.70 + p.y * kCellLat;
    f.max_lat = f.min_lat + kCellLat;
    f.min_lon = -74.00 + p.x * kCellLon;
    f.max_lon = f.min_lon + kCellLon;
    city.zones.push_back(f);
  }

  RngStream rng = RngStream(cfg.seed).fork({8});
  const int hours = cfg.weeks * 168;
  for (int h = 0; h < hours; ++h) {
    const auto ts = cfg.start.plus_hours(h);
    const auto ctx = time_context(ts);
    const double miss = (ctx.hour >= 6 && ctx.hour <= 21) ? cfg.missing_day : cfg.missing_night;
    for (int o = 0; o < n; ++o)
      for (int d = 0; d < n; ++d) {
        if (o == d) continue;
        const bool missing = rng.bernoulli(miss);
        const double noise = rng.normal();
        if (missing) continue;
        const double tau = synthetic_mean_travel_time(cfg, o, d, ctx) * roadworks_factor(cfg, o, d, h / 168) *
                           (1.0 + cfg.noise_cv * noise);
        city.records.push_back({city.zones[o].zone_id, city.zones[d].zone_id, ts, std::max(tau, 1.0)});
      }
  }
  return city;
}

void split_records(const std::vector<ODRecord>& records, Timestamp cut, std::vector<ODRecord>& before,
                   std::vector<ODRecord>& after) {
  for (const auto& r : records) (r.timestamp < cut ? before : after).push_back(r);
}

void write_records_csv(std::ostream& out, const std::vector<ODRecord>& records) {
  out << "origin,destination,timestamp,travel_time\n";
  for (const auto& r : records)
    out << r.origin << ',' << r.dest << ',' << r.timestamp.to_string() << ',' << text::format_double(r.travel_time)
        << '\n';
}

void write_zones_csv(std::ostream& out, const std::vector<ZoneFeatures>& zones) {
  using text::format_double;
  out << "zone_id,min_lat,min_lon,max_lat,max_lon\n";
  for (const auto& z : zones)
    out << z.zone_id << ',' << format_double(z.min_lat) << ',' << format_double(z.min_lon) << ','
        << format_double(z.max_lat) << ',' << format_double(z.max_lon) << '\n';
}

}  // namespace congae
