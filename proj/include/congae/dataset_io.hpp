#pragma once

// Line-delimited dataset container.
//
//   congae-dataset 1
//   scaler <inv_min> <inv_max>
//   zones <N>
//   zone <id> <min_lat> <min_lon> <max_lat> <max_lon> <s0> <s1> <s2> <s3>   (N lines)
//   labels <0|1>
//   snapshots <T>
//   snapshot <YYYY-MM-DDTHH> <hour> <dow> <edge_count> [<label>]           (T blocks)
//   edge <origin> <dest> <weight> <travel_time>                             (edge_count lines)
//   end
//
// Fields are separated by single spaces; doubles use the shortest exact
// representation, so write -> read -> write is byte-identical. `hour`/`dow`
// are stored explicitly because temporal injection rewrites the context
// independently of the timestamp.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "congae/od_graph.hpp"

namespace congae {

struct DatasetFile {
  Dataset dataset;
  bool has_labels = false;
  std::vector<int> labels;
};

void write_dataset(std::ostream& out, const Dataset& ds, const std::vector<int>* labels = nullptr);
DatasetFile read_dataset(std::istream& in);

std::string serialize_dataset(const Dataset& ds, const std::vector<int>* labels = nullptr);

void save_dataset(const std::filesystem::path& path, const Dataset& ds,
                  const std::vector<int>* labels = nullptr);
DatasetFile load_dataset(const std::filesystem::path& path);

/// Writes to `<path>.tmp` then renames, so a failed write leaves no partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace congae
