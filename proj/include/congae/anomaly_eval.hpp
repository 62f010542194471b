#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "congae/model.hpp"
#include "congae/od_graph.hpp"
#include "congae/training.hpp"

namespace congae {

struct LabeledDataset {
  Dataset dataset;
  std::vector<int> labels;  // 1 = anomalous slice

  void validate() const;
};

enum class AnomalyType { spatial, temporal };
std::string_view to_string(AnomalyType t);
AnomalyType anomaly_type_from_string(std::string_view s);

struct InjectionConfig {
  double gamma = 0.1;  // fraction of slices
  double alpha = 0.5;  // fraction of OD pairs in a polluted slice (spatial)
  double beta = 0.2;   // max relative travel-time perturbation (spatial)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Travel-time statistics per (origin, dest, hour of day, day of week).
class HourOfWeekStats {
 public:
  struct Cell {
    double mean = 0.0;
    double variance = 0.0;  // unbiased; 0 for a single sample
    std::size_t count = 0;
  };
  using Key = std::tuple<std::uint32_t, std::uint32_t, int, int>;

  /// Uses each snapshot's context and the edges' travel times.
  static HourOfWeekStats fit(const Dataset& ds);

  const Cell* find(std::uint32_t origin, std::uint32_t dest, TimeContext ctx) const;
  const std::map<Key, Cell>& cells() const noexcept { return cells_; }
  std::size_t node_count() const noexcept { return node_count_; }

 private:
  std::map<Key, Cell> cells_;
  std::size_t node_count_ = 0;
};

/// graph_loss over the snapshot's full edge set in eval mode.
/// Throws DataError for a snapshot without edges.
double anomaly_score(const ODSnapshot& snapshot, const ConGaeModel& model);

/// Scores every snapshot; empty snapshots yield nullopt.
std::vector<std::optional<double>> anomaly_scores(const Dataset& ds, const ConGaeModel& model,
                                                  std::size_t threads = 1);

/// Pairwise ROC-AUC with ties counted half, via a sort over scores.
/// Throws DomainError when only one class is present or a score is NaN.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Redraws every historically observed (OD, hour, dow) cell of the raw test
/// period from Normal(mean, variance) truncated below at 1 s, on the period's
/// contiguous hourly grid. Requires at least one week of data.
Dataset synth_clean_testset(std::span<const ODRecord> raw_test_records, std::span<const ZoneFeatures> zones,
                            const WeightScaler& scaler, std::uint64_t seed);
/// Same, starting from already assembled raw test snapshots.
Dataset synth_clean_testset(const Dataset& raw_test, std::uint64_t seed);

/// Multiplies tau by (1 + u), u ~ U(-beta, beta), on round(alpha |E|) edges of
/// round(gamma T) slices, then rescales the weights.
LabeledDataset inject_spatial(const Dataset& clean, const InjectionConfig& cfg);
/// Moves the hour context of round(gamma T) slices by 12 hours.
LabeledDataset inject_temporal(const Dataset& clean, const InjectionConfig& cfg);
LabeledDataset inject(AnomalyType type, const Dataset& clean, const InjectionConfig& cfg);

struct HaScores {
  std::vector<double> scores;
  std::size_t unmatched_snapshots = 0;  // scored 0: no edge had a historical cell
};

/// Mean squared travel-time deviation from the historical (hour, dow) mean.
HaScores ha_scores(const Dataset& test, const HourOfWeekStats& train_stats);

/// Round half away from zero, as used for slice and edge counts.
std::size_t round_count(double fraction, std::size_t total);

struct ExperimentCell {
  AnomalyType type = AnomalyType::spatial;
  double alpha = 0.5;
  double beta = 0.2;
  double gamma = 0.1;
};

struct ResultRow {
  AnomalyType type;
  double alpha;
  double beta;
  double gamma;
  std::string method;
  double auc_mean;
  double auc_std;  // sample standard deviation; 0 for a single repeat
  std::size_t repeats;
  std::uint64_t seed;
  std::vector<double> aucs;
};

struct ResultsTable {
  std::vector<ResultRow> rows;

  const ResultRow* find(AnomalyType type, double alpha, double beta, double gamma,
                        std::string_view method) const;
  /// anomaly_type,alpha,beta,gamma,method,auc_mean,auc_std,repeats,seed
  std::string to_csv() const;
};

struct NamedModel {
  std::string name;
  ConGaeModel model;
};

struct EvaluationInputs {
  std::span<const NamedModel> models;
  const HourOfWeekStats* ha_stats = nullptr;  // adds an "ha" method when set
  const Dataset* raw_test = nullptr;          // raw test snapshots, resampled per repeat
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// For every cell and repeat: resample a clean test set, inject anomalies,
/// score with each model (and HA) and compute AUC.
ResultsTable evaluate_grid(const EvaluationInputs& in, std::span<const ExperimentCell> grid);

/// Trains one model per variant name on `train`, then runs evaluate_grid with HA.
ResultsTable run_experiment(const Dataset& train, std::span<const ODRecord> raw_test_records,
                            std::span<const ExperimentCell> grid, std::size_t repeats,
                            const TrainConfig& model_cfg, std::span<const std::string> variants);

double mean(std::span<const double> xs);
/// Unbiased sample standard deviation; 0 when fewer than two values.
double sample_stddev(std::span<const double> xs);

}  // namespace congae
