#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "congae/checkpoint.hpp"
#include "congae/cli.hpp"
#include "congae/dataset_io.hpp"
#include "support.hpp"

using namespace congae;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "congae");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("congae_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  /// Synthetic 6-zone city split into two train weeks and one test week.
  void make_city() {
    auto r = run({"synth", "--records", path("records.csv"), "--zones", path("zones.csv"), "--weeks", "3",
                  "--zones-x", "3", "--zones-y", "2", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run({"ingest", "--records", path("records.csv"), "--zones", path("zones.csv"), "--out", path("train.ds"),
             "--split-at", "2019-01-21T00", "--test-out", path("test.ds")});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  static double mean_score(const std::string& csv_path) {
    std::ifstream in(csv_path);
    std::string line;
    std::getline(in, line);
    double sum = 0;
    int n = 0;
    while (std::getline(in, line)) {
      const auto a = line.find(','), b = line.find(',', a + 1);
      sum += std::stod(line.substr(a + 1, b - a - 1));
      ++n;
    }
    return sum / n;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, IngestIsDeterministicAndSummarizes) {
  make_city();
  auto r = run({"ingest", "--records", path("records.csv"), "--zones", path("zones.csv"), "--out", path("again.ds"),
                "--split-at", "2019-01-21T00", "--test-out", path("again_test.ds")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(path("train.ds")), read_file(path("again.ds")));
  EXPECT_EQ(read_file(path("test.ds")), read_file(path("again_test.ds")));
  EXPECT_NE(r.out.find("train: zones=6 snapshots=336"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("avg_edges_per_graph="), std::string::npos);
  EXPECT_NE(r.out.find("missing_rate="), std::string::npos);
  const auto manifest = read_file(path("again.ds.manifest"));
  EXPECT_NE(manifest.find("tool=congae"), std::string::npos);
  EXPECT_NE(manifest.find("input.records.sha256="), std::string::npos) << manifest;
}

TEST_F(CliTest, IngestTopZonesAndSchemaErrors) {
  make_city();
  auto r = run({"ingest", "--records", path("records.csv"), "--zones", path("zones.csv"), "--out", path("top.ds"),
                "--top-zones", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_dataset(path("top.ds")).dataset.node_count(), 4u);
  r = run({"ingest", "--records", path("records.csv"), "--zones", path("zones.csv"), "--out", path("bad.ds"),
           "--travel-time-col", "duration"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("duration"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("bad.ds")));
}

TEST_F(CliTest, InjectWithZeroGammaIsConfigError) {
  make_city();
  auto r = run({"inject", "--data", path("test.ds"), "--type", "spatial", "--gamma", "0", "--out", path("x.ds")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(path("x.ds")));
  EXPECT_FALSE(fs::exists(path("x.ds.manifest")));
}

TEST_F(CliTest, UsageAndDataErrorsMapToExitCodes) {
  EXPECT_EQ(run({"train", "--bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"score", "--data", path("missing.ds"), "--model", path("m.ckpt"), "--out", path("s.csv")}).code, 2);
  EXPECT_EQ(run({"train", "--data", path("missing.ds"), "--out", path("m.ckpt"), "--set", "epochs"}).code, 2);
}

TEST_F(CliTest, TrainingLowersScoresOnTrainingSlices) {
  make_city();
  const std::vector<std::string> common{"--set", "layer_dims=8,8", "--set", "graph_dim=8", "--set", "edge_hidden_dim=16",
                                        "--set", "hour_dim=4", "--set", "week_dim=4", "--set", "learning_rate=0.005",
                                        "--set", "use_bias=true"};
  auto args = std::vector<std::string>{"train", "--data", path("train.ds"), "--out", path("untrained.ckpt"), "--epochs", "0"};
  args.insert(args.end(), common.begin(), common.end());
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  args = {"train", "--data", path("train.ds"), "--out", path("trained.ckpt"), "--epochs", "8"};
  args.insert(args.end(), common.begin(), common.end());
  r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("trained.ckpt.report.csv")));
  EXPECT_TRUE(fs::exists(path("trained.ckpt.manifest")));

  ASSERT_EQ(run({"score", "--data", path("train.ds"), "--model", path("untrained.ckpt"), "--out", path("u.csv")}).code, 0);
  ASSERT_EQ(run({"score", "--data", path("train.ds"), "--model", path("trained.ckpt"), "--out", path("t.csv")}).code, 0);
  EXPECT_LT(mean_score(path("t.csv")), mean_score(path("u.csv")));
}

TEST_F(CliTest, ResumedTrainingMatchesStraightRun) {
  make_city();
  const std::vector<std::string> common{"--data", path("train.ds"), "--epochs", "4", "--set", "layer_dims=6,4",
                                        "--set", "graph_dim=5", "--set", "edge_hidden_dim=4", "--set", "hour_dim=3",
                                        "--set", "week_dim=2", "--set", "early_stop_patience=0"};
  auto args = std::vector<std::string>{"train", "--out", path("straight.ckpt")};
  args.insert(args.end(), common.begin(), common.end());
  ASSERT_EQ(run(args).code, 0);
  args = {"train", "--out", path("half.ckpt"), "--stop-after", "2"};
  args.insert(args.end(), common.begin(), common.end());
  ASSERT_EQ(run(args).code, 0);
  auto r = run({"train", "--data", path("train.ds"), "--resume", path("half.ckpt"), "--out", path("resumed.ckpt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(path("resumed.ckpt")), read_file(path("straight.ckpt")));
  EXPECT_EQ(read_file(path("resumed.ckpt.report.csv")), read_file(path("straight.ckpt.report.csv")));
  EXPECT_EQ(run({"train", "--data", path("train.ds"), "--resume", path("half.ckpt"), "--out", path("x.ckpt"),
                 "--epochs", "9"}).code,
            1);
}

TEST_F(CliTest, EvalOfConstantScoresIsHalf) {
  // Identical edge sets everywhere and a context-free model: every slice scores the same.
  Dataset ds;
  for (int i = 0; i < 3; ++i) {
    ZoneFeatures z;
    z.zone_id = "Z" + std::to_string(i);
    z.scaled = {0.5 * i, 0.1, 0.2, 0.3};
    ds.zones.push_back(z);
  }
  ds.scaler = {0.001, 0.01};
  std::vector<int> labels;
  for (int t = 0; t < 12; ++t) {
    ODSnapshot s;
    s.node_count = 3;
    s.timestamp = Timestamp::from_civil(2019, 1, 7, 0).plus_hours(t);
    s.context = time_context(s.timestamp);
    s.edges = {{0, 1, 0.4, 200}, {2, 1, 0.7, 150}};
    s.canonicalize();
    ds.snapshots.push_back(s);
    labels.push_back(t % 4 == 0);
  }
  save_dataset(path("labeled.ds"), ds, &labels);
  TrainConfig cfg;
  cfg.dims = congae::testing::tiny_dims();
  cfg.variant = ModelVariant::named("sp");
  cfg.epochs = 0;
  Trainer t(ds, cfg);
  save_checkpoint(path("sp.ckpt"), t.state());
  auto r = run({"eval", "--data", path("labeled.ds"), "--model", path("sp.ckpt"), "--ha-train", path("labeled.ds"),
                "--out", path("auc.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_file(path("auc.csv"));
  EXPECT_NE(csv.find(",sp,0.5,"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",ha,0.5,"), std::string::npos) << csv;
}

TEST_F(CliTest, ResampleInjectEvalPipeline) {
  make_city();
  auto r = run({"train", "--data", path("train.ds"), "--out", path("m.ckpt"), "--epochs", "2", "--set",
                "layer_dims=6,4", "--set", "graph_dim=5", "--set", "edge_hidden_dim=4", "--set", "hour_dim=3", "--set",
                "week_dim=2"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(run({"resample", "--data", path("test.ds"), "--seed", "3", "--out", path("clean.ds")}).code, 0);
  r = run({"inject", "--data", path("clean.ds"), "--type", "temporal", "--gamma", "0.1", "--seed", "5", "--out",
           path("labeled.ds")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("anomalous=17"), std::string::npos) << r.out;
  r = run({"eval", "--data", path("labeled.ds"), "--model", path("m.ckpt"), "--ha-train", path("train.ds"), "--out",
           path("auc.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_file(path("auc.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "anomaly_type,alpha,beta,gamma,method,auc_mean,auc_std,repeats,seed");
  EXPECT_NE(csv.find("temporal,0.5,0.2,0.1,congae,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("temporal,0.5,0.2,0.1,ha,"), std::string::npos) << csv;
}

TEST_F(CliTest, ReportRunsAnExperimentManifest) {
  make_city();
  std::ofstream(path("experiment.txt")) << "# tiny grid\n"
                                        << "train=train.ds\ntest=test.ds\nvariants=congae,t\nrepeats=2\n"
                                        << "experiment_seed=8\ngrid=spatial:0.5:0.2:0.1;temporal:0.5:0.2:0.1\n"
                                        << "epochs=2\nlayer_dims=6,4\ngraph_dim=5\nedge_hidden_dim=4\n"
                                        << "hour_dim=3\nweek_dim=2\n";
  auto r = run({"report", "--manifest", path("experiment.txt"), "--out", path("results.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_file(path("results.csv"));
  int rows = 0;
  for (char c : csv) rows += c == '\n';
  EXPECT_EQ(rows, 1 + 2 * 3);
  EXPECT_NE(csv.find("temporal,0.5,0.2,0.1,t,"), std::string::npos) << csv;
  r = run({"report", "--manifest", path("experiment.txt"), "--out", path("results2.csv")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(read_file(path("results2.csv")), csv);
}
