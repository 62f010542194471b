#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "congae/adam.hpp"
#include "congae/model.hpp"
#include "congae/od_graph.hpp"

namespace congae {

struct TrainConfig {
  std::size_t epochs = 150;
  std::size_t batch_size = 10;
  double validation_fraction = 0.10;
  double learning_rate = 5e-5;
  double lr_decay_factor = 0.5;
  std::size_t lr_decay_every_epochs = 50;
  double p_e_drop = 0.2;
  double p_drop = 0.2;
  ModelDims dims;
  ModelVariant variant;
  std::uint64_t seed = 0;
  std::size_t early_stop_patience = 10;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Worker cap; results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
  /// lr0 * decay^floor(epoch / every)
  double learning_rate_at(std::size_t epoch) const;

  /// Hyperparameter profiles: uber, nyc, chicago (published settings) and
  /// desk (small dimensions for laptop-scale synthetic data).
  static TrainConfig profile(std::string_view name);

  bool operator==(const TrainConfig&) const = default;
};

/// Flat key=value view of a config (one entry per field, stable order).
std::vector<std::pair<std::string, std::string>> config_entries(const TrainConfig& cfg);
/// Sets one field from its text form; throws ConfigError on unknown keys or bad values.
void set_config_value(TrainConfig& cfg, std::string_view key, std::string_view value);
std::string config_to_text(const TrainConfig& cfg);
TrainConfig config_from_text(std::string_view text);

struct EpochRecord {
  std::size_t epoch;
  double train_loss;
  double val_loss;
  double learning_rate;

  bool operator==(const EpochRecord&) const = default;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::optional<std::size_t> best_epoch;
  std::string stop_reason;  // "max_epochs" | "early_stop" | "" while running

  /// `epoch,train_loss,val_loss,lr` with a header row.
  std::string to_csv() const;

  bool operator==(const TrainReport&) const = default;
};

/// Everything needed to continue training exactly where it stopped.
struct TrainingState {
  TrainConfig config;
  ConGaeModel model;
  AdamState adam;
  ModelParams best_params;  // values at the best validation epoch
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::size_t epochs_since_improvement = 0;
  std::size_t epochs_done = 0;
  bool finished = false;
  TrainReport report;
};

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Chronological split: the last ceil(fraction * T) snapshots validate.
/// Snapshots without edges are left out of both parts.
DataSplit chronological_split(const Dataset& ds, double validation_fraction);

class Trainer {
 public:
  /// Fresh model initialized from config.seed.
  Trainer(const Dataset& dataset, TrainConfig config);
  /// Resumes from a saved state; the dataset must be the one it was trained on.
  Trainer(const Dataset& dataset, TrainingState state);

  /// Runs at most `max_epochs` further epochs; returns how many ran.
  std::size_t run(std::size_t max_epochs = std::numeric_limits<std::size_t>::max());
  void run_epoch();

  bool finished() const noexcept { return state_.finished; }
  const TrainingState& state() const noexcept { return state_; }
  const TrainReport& report() const noexcept { return state_.report; }
  const ConGaeModel& current_model() const noexcept { return state_.model; }
  /// Copy of the model carrying the best-validation parameters.
  ConGaeModel best_model() const;

  double validation_loss(const ConGaeModel& model) const;

 private:
  void init_split();

  const Dataset& dataset_;
  TrainingState state_;
  DataSplit split_;
};

struct TrainResult {
  ConGaeModel model;  // best-validation parameters
  TrainReport report;
};

TrainResult train(const Dataset& dataset, const TrainConfig& config);

/// Builds an untrained model for a dataset (node features from its zones).
ConGaeModel initial_model(const Dataset& dataset, const TrainConfig& config);

}  // namespace congae
