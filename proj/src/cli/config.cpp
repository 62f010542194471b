#include <fstream>
#include <sstream>

#include "cli_internal.hpp"
#include "congae/dataset_io.hpp"
#include "congae/error.hpp"

namespace congae::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + text + "'");
  return {std::string(trim(std::string_view(text).substr(0, eq))), std::string(trim(std::string_view(text).substr(eq + 1)))};
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      out.push_back(split_assignment(std::string(t)));
    } catch (const ConfigError&) {
      throw ConfigError(origin + ":" + std::to_string(n) + ": expected key=value");
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_values(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path.string());
}

TrainConfig resolve_train_config(const ConfigSources& src) {
  std::vector<std::pair<std::string, std::string>> file_entries;
  std::string profile = src.profile;
  if (!src.file.empty()) {
    for (auto& kv : read_key_values(src.file)) {
      if (kv.first == "profile") {
        if (profile.empty()) profile = kv.second;
      } else {
        file_entries.push_back(std::move(kv));
      }
    }
  }
  TrainConfig cfg = profile.empty() ? TrainConfig{} : TrainConfig::profile(profile);
  for (const auto& [k, v] : file_entries) set_config_value(cfg, k, v);
  for (const auto& [k, v] : src.flags) set_config_value(cfg, k, v);
  cfg.validate();
  return cfg;
}

}  // namespace congae::cli
