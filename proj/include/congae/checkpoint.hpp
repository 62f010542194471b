#pragma once

// Binary checkpoint, little-endian:
//
//   "CONGAECK" u32 version
//   str config (key=value text)            str = u64 length + bytes
//   mat node_features                       mat = u64 rows, u64 cols, f64 values
//   u64 count, then (str name, mat value)   current parameters
//   u64 step, f64 beta1, beta2, epsilon, learning_rate, then m and v as mat lists
//   u64 epochs_done, u8 finished, f64 best_val_loss, u64 epochs_since_improvement
//   u8 has_best_epoch, u64 best_epoch, str stop_reason
//   u64 count, then (str name, mat value)   best-validation parameters
//   u64 count, then (u64 epoch, f64 train_loss, f64 val_loss, f64 lr)
//   u64 FNV-1a hash of every preceding byte

#include <cstdint>
#include <filesystem>
#include <string>

#include "congae/training.hpp"

namespace congae {

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const TrainingState& state);
/// When `expected` is given the model is rebuilt from its dimensions and the
/// stored tensors must match them; a mismatch names the offending parameter.
TrainingState deserialize_checkpoint(const std::string& bytes, const TrainConfig* expected = nullptr);

void save_checkpoint(const std::filesystem::path& path, const TrainingState& state);
TrainingState load_checkpoint(const std::filesystem::path& path, const TrainConfig* expected = nullptr);

}  // namespace congae
