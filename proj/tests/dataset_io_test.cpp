#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "congae/dataset_io.hpp"
#include "support.hpp"

using namespace congae;

TEST(DatasetIo, RoundTripIsByteIdentical) {
  const auto ds = congae::testing::dataset_from_city(generate_city(congae::testing::small_city(1)));
  const std::vector<int> labels = [&] {
    std::vector<int> l(ds.snapshots.size(), 0);
    l[3] = 1;
    return l;
  }();
  const auto text = serialize_dataset(ds, &labels);
  std::istringstream in(text);
  const auto back = read_dataset(in);
  EXPECT_EQ(back.dataset, ds);
  EXPECT_TRUE(back.has_labels);
  EXPECT_EQ(back.labels, labels);
  EXPECT_EQ(serialize_dataset(back.dataset, &back.labels), text);
}

TEST(DatasetIo, TruncatedFileIsDataError) {
  const auto ds = congae::testing::dataset_from_city(generate_city(congae::testing::small_city(1)));
  auto text = serialize_dataset(ds);
  text.resize(text.size() / 2);
  std::istringstream in(text);
  EXPECT_THROW(read_dataset(in), DataError);
}

TEST(DatasetIo, AtomicWriteLeavesNoTempFile) {
  const auto dir = std::filesystem::temp_directory_path() / "congae_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "x.txt";
  write_file_atomic(path, "hello\n");
  EXPECT_EQ(read_file(path), "hello\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "x.txt.tmp"));
  std::filesystem::remove_all(dir);
}
