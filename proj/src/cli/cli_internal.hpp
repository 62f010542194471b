#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "congae/training.hpp"

namespace congae::cli {

namespace fs = std::filesystem;

/// Where a training configuration comes from; later sources win.
struct ConfigSources {
  std::string profile;                                     // empty: built-in defaults
  std::string file;                                        // key=value file, may be empty
  std::vector<std::pair<std::string, std::string>> flags;  // explicit overrides
};

TrainConfig resolve_train_config(const ConfigSources& src);

/// Parses `key=value`; throws ConfigError otherwise.
std::pair<std::string, std::string> split_assignment(const std::string& text);

/// key=value lines with '#' comments, in file order.
std::vector<std::pair<std::string, std::string>> read_key_values(const fs::path& path);
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text,
                                                                  const std::string& origin);

std::string sha256_hex(const std::string& bytes);
std::string file_sha256(const fs::path& path);

/// Everything needed to replay a command, stored as `<primary output>.manifest`.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set(const std::string& key, const std::string& value);
  void add_config(const TrainConfig& cfg);
  void add_input(const std::string& role, const fs::path& path);
  void add_output(const std::string& role, const fs::path& path);

  std::string to_text() const;
  /// Writes next to `primary` as `<primary>.manifest`.
  void write_for(const fs::path& primary) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

fs::path manifest_path(const fs::path& primary);

}  // namespace congae::cli
