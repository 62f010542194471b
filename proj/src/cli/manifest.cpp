#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "cli_internal.hpp"
#include "congae/cli.hpp"
#include "congae/dataset_io.hpp"
#include "congae/error.hpp"

namespace congae::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw DataError("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string file_sha256(const fs::path& path) { return sha256_hex(read_file(path)); }

RunManifest::RunManifest(std::string command) {
  entries_.emplace_back("tool", "congae");
  entries_.emplace_back("version", kToolVersion);
  entries_.emplace_back("command", std::move(command));
}

void RunManifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void RunManifest::add_config(const TrainConfig& cfg) {
  for (const auto& [k, v] : config_entries(cfg)) set("config." + k, v);
}

void RunManifest::add_input(const std::string& role, const fs::path& path) {
  set("input." + role, path.string());
  set("input." + role + ".sha256", file_sha256(path));
}

void RunManifest::add_output(const std::string& role, const fs::path& path) {
  set("output." + role, path.string());
  set("output." + role + ".sha256", file_sha256(path));
}

std::string RunManifest::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

fs::path manifest_path(const fs::path& primary) {
  fs::path p = primary;
  p += ".manifest";
  return p;
}

void RunManifest::write_for(const fs::path& primary) const { write_file_atomic(manifest_path(primary), to_text()); }

}  // namespace congae::cli
