#include <gtest/gtest.h>

#include <cmath>

#include "congae/decoder.hpp"
#include "congae/encoder.hpp"
#include "support.hpp"

using namespace congae;
using congae::testing::random_model;
using congae::testing::random_snapshot;

namespace {

std::vector<double> embedding_of(const ConGaeModel& m, RngStream& rng) {
  std::vector<double> g(m.dims().graph_dim);
  for (auto& v : g) v = rng.uniform();
  return g;
}

}  // namespace

TEST(DecodeNodes, ZeroWeightsRecoverZeros) {
  RngStream rng(1);
  auto m = random_model(4, "congae", rng);
  m.params()[m.ungraph_slot()].value.fill(0.0);
  const std::vector<double> hour(m.dims().hour_dim, 1.0), week(m.dims().week_dim, 1.0);
  const auto nodes = decode_nodes(embedding_of(m, rng), hour, week, m);
  for (double v : nodes.flat()) EXPECT_EQ(v, 0.0);
}

TEST(DecodeNodes, HandComputedUnstackOrder) {
  ModelDims d;
  d.layer_dims = {2, 1};
  d.hour_dim = d.week_dim = 1;
  d.graph_dim = 1;
  d.edge_hidden_dim = 2;
  RngStream rng(2);
  auto m = ConGaeModel::create(d, ModelVariant{}, Matrix(2, 4, 0.1), rng);
  m.params()[m.ungraph_slot()].value = Matrix(2, 3, {1, 2, 3, 1, -1, 2});
  const std::vector<double> hg{2.0}, hour{1.0}, week{0.5};
  const auto nodes = decode_nodes(hg, hour, week, m);
  ASSERT_EQ(nodes.rows(), 2u);
  ASSERT_EQ(nodes.cols(), 1u);
  EXPECT_DOUBLE_EQ(nodes(0, 0), 2 + 2 + 1.5);
  EXPECT_DOUBLE_EQ(nodes(1, 0), 2 - 1 + 1);

  m.params()[m.ungraph_slot()].value = Matrix(2, 3, {-1, 0.5, 4, 0, 0, 0});
  const auto relu_cut = decode_nodes(hg, hour, week, m);
  EXPECT_DOUBLE_EQ(relu_cut(0, 0), -2 + 0.5 + 2);
  EXPECT_EQ(relu_cut(1, 0), 0.0);
}

TEST(DecodeNodes, UnconditionedDecoderIgnoresContext) {
  RngStream rng(3);
  auto m = random_model(4, "noncontextdec", rng);
  const auto g = embedding_of(m, rng);
  const std::vector<double> h1(m.dims().hour_dim, 1.0), h2(m.dims().hour_dim, -3.0);
  const std::vector<double> w(m.dims().week_dim, 0.7);
  EXPECT_EQ(decode_nodes(g, h1, w, m), decode_nodes(g, h2, w, m));
}

TEST(PredictEdge, ZeroOutputLayerGivesHalf) {
  RngStream rng(4);
  auto m = random_model(3, "congae", rng);
  m.params()[m.edge_out_slot()].value.fill(0.0);
  std::vector<double> a(m.dims().node_dim()), b(m.dims().node_dim());
  for (int t = 0; t < 10; ++t) {
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal();
    EXPECT_EQ(predict_edge(a, b, m), 0.5);
  }
}

TEST(PredictEdge, DirectionalAsymmetryWitness) {
  RngStream rng(5);
  double best = 0.0;
  for (int trial = 0; trial < 200 && best <= 0.01; ++trial) {
    auto m = random_model(3, "congae", rng);
    std::vector<double> a(m.dims().node_dim()), b(m.dims().node_dim());
    for (auto& v : a) v = rng.uniform();
    for (auto& v : b) v = rng.uniform();
    best = std::max(best, std::abs(predict_edge(a, b, m) - predict_edge(b, a, m)));
  }
  EXPECT_GT(best, 0.01);
}

TEST(PredictEdge, EqualInputsAreTrivallySymmetric) {
  RngStream rng(6);
  auto m = random_model(3, "congae", rng);
  std::vector<double> a(m.dims().node_dim());
  for (auto& v : a) v = rng.uniform();
  const auto b = a;
  EXPECT_EQ(predict_edge(a, b, m), predict_edge(b, a, m));
}

TEST(Reconstruct, EmptyAndDuplicatedQueries) {
  RngStream rng(7);
  auto m = random_model(4, "congae", rng);
  const auto g = embedding_of(m, rng);
  EXPECT_TRUE(reconstruct(g, {3, 2}, {}, m).empty());
  const std::vector<EdgeQuery> q{{1, 2}, {1, 2}, {3, 0}};
  const auto w = reconstruct(g, {3, 2}, q, m);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], w[1]);
  const std::vector<EdgeQuery> bad{{0, 4}};
  EXPECT_THROW(reconstruct(g, {3, 2}, bad, m), DataError);
}

TEST(Reconstruct, EqualsIndependentPairPredictions) {
  RngStream rng(8);
  for (const char* v : {"congae", "sp", "noncontextdec"}) {
    auto m = random_model(3, v, rng, congae::testing::tiny_dims(true));
    const auto g = embedding_of(m, rng);
    const TimeContext ctx{15, 5};
    RngStream unused;
    const auto cv = context_lookup(ctx, m, RunMode::eval(), unused);
    const auto nodes = decode_nodes(g, cv.hour, cv.week, m);
    std::vector<EdgeQuery> q;
    for (std::uint32_t i = 0; i < 3; ++i)
      for (std::uint32_t j = 0; j < 3; ++j) q.emplace_back(i, j);
    const auto w = reconstruct(g, ctx, q, m);
    for (std::size_t k = 0; k < q.size(); ++k) {
      EXPECT_DOUBLE_EQ(w[k], predict_edge(nodes.row(q[k].first), nodes.row(q[k].second), m)) << v;
      EXPECT_GT(w[k], 0.0);
      EXPECT_LT(w[k], 1.0);
    }
  }
}

TEST(Reconstruct, OutputsStayInsideUnitInterval) {
  RngStream rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_model(5, "congae", rng);
    auto s = random_snapshot(5, 0.7, rng);
    RngStream unused;
    const auto g = encode(s, m, RunMode::eval(), unused);
    std::vector<EdgeQuery> q;
    for (const auto& e : s.edges) q.emplace_back(e.origin, e.dest);
    for (double w : reconstruct(g, s.context, q, m)) {
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, 1.0);
    }
  }
}
