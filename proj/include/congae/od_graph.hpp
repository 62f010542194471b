#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "congae/error.hpp"
#include "congae/matrix.hpp"

namespace congae {

/// Calendar hour in the dataset's local civil time (no DST normalization).
class Timestamp {
 public:
  Timestamp() = default;
  static Timestamp from_hours(std::int64_t hours_since_epoch) { return Timestamp(hours_since_epoch); }
  static Timestamp from_civil(int year, unsigned month, unsigned day, int hour);
  /// Accepts `YYYY-MM-DD`, followed optionally by `T` or a space and `HH`
  /// (trailing `:MM[:SS]` is ignored). Throws DataError when malformed.
  static Timestamp parse(std::string_view text);
  /// Date-only string plus a separate hour-of-day field.
  static Timestamp parse_split(std::string_view date, std::string_view hour);

  std::int64_t hours_since_epoch() const noexcept { return hours_; }
  int hour_of_day() const;
  /// 0 = Monday ... 6 = Sunday.
  int day_of_week() const;
  /// `YYYY-MM-DDTHH`
  std::string to_string() const;

  Timestamp plus_hours(std::int64_t h) const { return Timestamp(hours_ + h); }

  auto operator<=>(const Timestamp&) const = default;

 private:
  explicit Timestamp(std::int64_t h) : hours_(h) {}
  std::int64_t hours_ = 0;
};

struct TimeContext {
  int hour = 0;  // [0, 23]
  int dow = 0;   // [0, 6], 0 = Monday

  bool valid() const { return hour >= 0 && hour < 24 && dow >= 0 && dow < 7; }
  auto operator<=>(const TimeContext&) const = default;
};

TimeContext time_context(Timestamp t);

struct ODRecord {
  std::string origin;
  std::string dest;
  Timestamp timestamp;
  double travel_time = 0.0;  // seconds, > 0
};

/// Column mapping for delimited OD record files. When both `date_column`
/// and `hour_column` are set they replace `timestamp_column`.
struct RecordSchema {
  std::string origin_column = "origin";
  std::string dest_column = "destination";
  std::string timestamp_column = "timestamp";
  std::string date_column;
  std::string hour_column;
  std::string travel_time_column = "travel_time";
  char delimiter = ',';
  /// Collect row errors instead of throwing on the first one.
  bool lenient = false;
};

struct RecordParse {
  std::vector<ODRecord> records;
  std::vector<RowError> errors;
};

RecordParse parse_od_records(std::istream& in, const RecordSchema& schema);

struct ZoneFeatures {
  std::string zone_id;
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;
  /// (min_lat, min_lon, max_lat, max_lon) min-max scaled over the selected zones.
  std::array<double, 4> scaled{};

  bool operator==(const ZoneFeatures&) const = default;
};

/// Reads `zone_id,min_lat,min_lon,max_lat,max_lon` rows (header required).
std::vector<ZoneFeatures> read_zone_features(std::istream& in, char delimiter = ',');

/// Restricts `all` to `zone_ids` (in that order) and fills `scaled` column-wise.
/// Throws DataError if a zone has no feature row.
std::vector<ZoneFeatures> prepare_zones(std::span<const ZoneFeatures> all,
                                        std::span<const std::string> zone_ids);

/// The k zones with the most distinct counterpart zones, ties broken by record
/// count (descending) then id; returned in lexicographic order.
std::vector<std::string> select_top_zones(std::span<const ODRecord> records, std::size_t k);

/// Min-max map of inverse travel time onto [0, 1].
struct WeightScaler {
  double inv_min = 0.0;
  double inv_max = 1.0;

  /// clamp((1/tau - inv_min) / (inv_max - inv_min), 0, 1); tau > 0.
  double scale(double travel_time) const;
  /// Inverse of the unclamped affine map.
  double travel_time_for(double weight) const;

  bool operator==(const WeightScaler&) const = default;
};

/// inv_min / inv_max are the 1st and 99th percentiles (linear interpolation)
/// of 1/tau over the records.
WeightScaler fit_weight_scaler(std::span<const ODRecord> train_records);
WeightScaler fit_weight_scaler(std::span<const double> travel_times);

double scale_weight(const WeightScaler& scaler, double travel_time);

/// Linear-interpolation percentile (q in [0, 1]) of an ascending-sorted range.
double percentile_sorted(std::span<const double> sorted, double q);

struct Edge {
  std::uint32_t origin = 0;
  std::uint32_t dest = 0;
  double weight = 0.0;       // [0, 1]
  double travel_time = 0.0;  // seconds, kept for travel-time space operations

  bool operator==(const Edge&) const = default;
};

struct ODSnapshot {
  std::size_t node_count = 0;
  std::vector<Edge> edges;
  TimeContext context;
  Timestamp timestamp;

  /// Sorts edges by (dest, origin), the order used for all summations.
  void canonicalize();
  /// Throws DataError when an index, weight or duplicate pair is invalid.
  void validate() const;

  bool operator==(const ODSnapshot&) const = default;
};

struct Dataset {
  std::vector<ZoneFeatures> zones;
  WeightScaler scaler;
  std::vector<ODSnapshot> snapshots;

  std::size_t node_count() const { return zones.size(); }
  /// N x 4 matrix of scaled bounding boxes in canonical order.
  Matrix node_features() const;
  std::size_t edge_count() const;
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

/// One snapshot per distinct timestamp with at least one in-zone record.
/// Duplicate (origin, dest, timestamp) travel times are averaged before
/// scaling; self-loops and out-of-zone records are dropped.
Dataset build_snapshots(std::span<const ODRecord> records, std::vector<ZoneFeatures> zones,
                        const WeightScaler& scaler);

}  // namespace congae
