#pragma once

// Synthetic city for desk-scale experiments: a grid of rectangular zones with
// hourly OD travel times driven by a rush/off-peak regime, directional commute
// flows, per-zone hotspots and Gaussian noise, with random missing cells.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "congae/od_graph.hpp"

namespace congae {

/// A persistent slowdown on every trip that starts or ends in `zones`,
/// active for weeks [start_week, end_week).
struct Roadworks {
  std::vector<int> zones;
  int start_week = 0;
  int end_week = 0;
  double slowdown = 0.0;
};

struct SyntheticCityConfig {
  int zones_x = 5;
  int zones_y = 4;
  int weeks = 8;
  Timestamp start = Timestamp::from_civil(2019, 1, 7, 0);  // a Monday
  double base_seconds = 120.0;   // fixed part of every trip
  double seconds_per_km = 100.0;
  double noise_cv = 0.02;
  double missing_day = 0.2;    // drop probability 06:00-21:59
  double missing_night = 0.4;  // drop probability otherwise
  double rush_weekday = 1.6;   // travel-time multiplier at the rush peak
  double rush_weekend = 1.25;
  double commute_extra = 0.25;  // extra slowdown on the commute direction
  double hotspot = 0.12;
  double detour_spread = 0.3;  // per-pair detour factor is uniform in 1 +- spread / 2
  std::vector<Roadworks> roadworks{{{0, 1, 5, 6}, 2, 1000, 0.15}, {{13, 14, 18, 19}, 0, 4, 0.15}};
  std::uint64_t seed = 0;
};

struct SyntheticCity {
  std::vector<ZoneFeatures> zones;  // raw bounding boxes
  std::vector<ODRecord> records;    // sorted by timestamp, then origin, dest
};

/// Rush hours are 07:00-18:59, so a 12-hour shift always changes regime.
bool is_rush_hour(int hour);

/// Noise-free travel time of one OD pair at one hour, without roadworks.
double synthetic_mean_travel_time(const SyntheticCityConfig& cfg, int origin, int dest, TimeContext ctx);
/// Roadworks multiplier for a pair in a given week since the start.
double roadworks_factor(const SyntheticCityConfig& cfg, int origin, int dest, int week);

SyntheticCity generate_city(const SyntheticCityConfig& cfg);

/// Records with timestamp < cut go to `before`, the rest to `after`.
void split_records(const std::vector<ODRecord>& records, Timestamp cut, std::vector<ODRecord>& before,
                   std::vector<ODRecord>& after);

void write_records_csv(std::ostream& out, const std::vector<ODRecord>& records);
void write_zones_csv(std::ostream& out, const std::vector<ZoneFeatures>& zones);

}  // namespace congae
