#include <gtest/gtest.h>

#include <cmath>

#include "congae/anomaly_eval.hpp"
#include "congae/loss.hpp"
#include "support.hpp"

using namespace congae;
using congae::testing::random_model;
using congae::testing::random_snapshot;

namespace {

// O(P * N) pairwise count with ties worth one half.
double brute_auc(const std::vector<double>& s, const std::vector<int>& l) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (l[i] == 1 && l[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  return wins / pairs;
}

Dataset empty_dataset(std::size_t n) {
  Dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    ZoneFeatures z;
    z.zone_id = "Z" + std::to_string(i);
    z.scaled = {0.1 * i, 0.2, 0.3, 0.4};
    ds.zones.push_back(z);
  }
  ds.scaler = {1.0 / 1000.0, 1.0 / 50.0};
  return ds;
}

ODSnapshot slice(const Dataset& ds, Timestamp ts, std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> tt) {
  ODSnapshot s;
  s.node_count = ds.node_count();
  s.timestamp = ts;
  s.context = time_context(ts);
  for (auto& [od, tau] : tt) s.edges.push_back({od.first, od.second, ds.scaler.scale(tau), tau});
  s.canonicalize();
  return s;
}

// Two weeks, three zones. 0->1 is observed every hour (200 s, except Monday
// 08:00 where the two weeks give 100 s and 110 s); 1->2 only on the first
// Wednesday at 03:00; 2->0 never.
Dataset raw_two_weeks() {
  auto ds = empty_dataset(3);
  const auto start = Timestamp::from_civil(2019, 1, 7, 0);
  for (int h = 0; h < 336; ++h) {
    const auto ts = start.plus_hours(h);
    const auto ctx = time_context(ts);
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> tt;
    tt.push_back({{0, 1}, ctx.hour == 8 && ctx.dow == 0 ? 100.0 + 10.0 * (h / 168) : 200.0});
    if (h == 2 * 24 + 3) tt.push_back({{1, 2}, 321.0});
    ds.snapshots.push_back(slice(ds, ts, tt));
  }
  return ds;
}

Dataset random_clean(std::size_t t, std::uint64_t seed) {
  auto ds = empty_dataset(5);
  RngStream rng(seed);
  const auto start = Timestamp::from_civil(2019, 1, 7, 0);
  for (std::size_t k = 0; k < t; ++k) {
    auto s = random_snapshot(5, 0.6, rng, time_context(start.plus_hours(static_cast<std::int64_t>(k))));
    s.timestamp = start.plus_hours(static_cast<std::int64_t>(k));
    for (auto& e : s.edges) {
      e.travel_time = rng.uniform(60.0, 900.0);
      e.weight = ds.scaler.scale(e.travel_time);
    }
    ds.snapshots.push_back(s);
  }
  return ds;
}

}  // namespace

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, std::vector<int>{1, 0, 1, 0}), 0.5);
  EXPECT_EQ(roc_auc(std::vector<double>{0.8, 0.6, 0.7, 0.2}, std::vector<int>{1, 0, 1, 0}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.9}, std::vector<int>{1, 0}), 0.0);
}

TEST(RocAuc, Errors) {
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), DomainError);
  EXPECT_THROW(roc_auc(std::vector<double>{1, std::nan("")}, std::vector<int>{1, 0}), DomainError);
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<int>{1}), DimensionError);
}

TEST(RocAuc, MatchesBruteForceAndIsRankInvariant) {
  RngStream rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(12)) / 8.0;  // coarse grid forces ties
      l[i] = rng.bernoulli(0.3) ? 1 : 0;
    }
    l[0] = 1;
    l[1] = 0;
    const double auc = roc_auc(s, l);
    EXPECT_EQ(auc, brute_auc(s, l));
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = s[i] * s[i] * s[i] + 2.0 * s[i] - 5.0;
    EXPECT_EQ(roc_auc(t, l), auc);
  }
}

TEST(HourOfWeekStats, CellsAndUnbiasedVariance) {
  const auto raw = raw_two_weeks();
  const auto stats = HourOfWeekStats::fit(raw);
  const auto* c = stats.find(0, 1, {8, 0});
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->count, 2u);
  EXPECT_EQ(c->mean, 105.0);
  EXPECT_EQ(c->variance, 50.0);
  const auto* once = stats.find(1, 2, {3, 2});
  ASSERT_NE(once, nullptr);
  EXPECT_EQ(once->variance, 0.0);
  EXPECT_EQ(stats.find(2, 0, {3, 2}), nullptr);
}

TEST(Resample, DegenerateAndMissingCells) {
  const auto raw = raw_two_weeks();
  const auto clean = synth_clean_testset(raw, 4);
  ASSERT_EQ(clean.snapshots.size(), raw.snapshots.size());
  EXPECT_NO_THROW(clean.validate());
  for (const auto& s : clean.snapshots) {
    EXPECT_EQ(s.context, time_context(s.timestamp));
    for (const auto& e : s.edges) {
      EXPECT_FALSE(e.origin == 2 && e.dest == 0);
      if (e.origin == 1 && e.dest == 2) {
        EXPECT_EQ(s.context, (TimeContext{3, 2}));
        EXPECT_EQ(e.travel_time, 321.0);
      }
      if (e.origin == 0 && e.dest == 1 && !(s.context == TimeContext{8, 0})) EXPECT_EQ(e.travel_time, 200.0);
      EXPECT_EQ(e.weight, clean.scaler.scale(e.travel_time));
    }
  }
  // The once-seen Wednesday cell appears in both resampled weeks.
  int seen = 0;
  for (const auto& s : clean.snapshots)
    for (const auto& e : s.edges) seen += e.origin == 1 && e.dest == 2;
  EXPECT_EQ(seen, 2);
}

TEST(Resample, CellMeanMatchesFittedMean) {
  const auto raw = raw_two_weeks();
  const auto stats = HourOfWeekStats::fit(raw);
  const auto* cell = stats.find(0, 1, {8, 0});
  double sum = 0;
  const int draws = 1000;
  for (int k = 0; k < draws; ++k) {
    const auto clean = synth_clean_testset(raw, 1000 + static_cast<std::uint64_t>(k));
    const auto& s = clean.snapshots[8];  // first Monday 08:00
    ASSERT_EQ(s.context, (TimeContext{8, 0}));
    sum += s.edges.at(0).travel_time;
  }
  EXPECT_NEAR(sum / draws, cell->mean, 3.0 * std::sqrt(cell->variance) / std::sqrt(draws));
}

TEST(Resample, NeedsAWeek) {
  auto raw = raw_two_weeks();
  raw.snapshots.resize(100);
  EXPECT_THROW(synth_clean_testset(raw, 0), DataError);
}

TEST(InjectSpatial, CountsBoundsAndUntouchedSlices) {
  const auto clean = random_clean(100, 3);
  InjectionConfig cfg{0.1, 0.5, 0.2, 9};
  const auto out = inject_spatial(clean, cfg);
  int positives = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    const auto& a = clean.snapshots[t];
    const auto& b = out.dataset.snapshots[t];
    positives += out.labels[t];
    if (!out.labels[t]) {
      EXPECT_EQ(a, b);
      continue;
    }
    ASSERT_EQ(a.edges.size(), b.edges.size());
    std::size_t changed = 0;
    for (std::size_t e = 0; e < a.edges.size(); ++e) {
      if (a.edges[e] == b.edges[e]) continue;
      ++changed;
      const double u = b.edges[e].travel_time / a.edges[e].travel_time - 1.0;
      EXPECT_LE(std::abs(u), 0.2 + 1e-12);
      EXPECT_EQ(b.edges[e].weight, clean.scaler.scale(b.edges[e].travel_time));
      EXPECT_EQ(b.edges[e].origin, a.edges[e].origin);
    }
    EXPECT_EQ(changed, round_count(0.5, a.edges.size()));
    EXPECT_EQ(b.context, a.context);
  }
  EXPECT_EQ(positives, 10);
}

TEST(InjectSpatial, ZeroBetaKeepsWeights) {
  const auto clean = random_clean(50, 4);
  const auto out = inject_spatial(clean, {0.2, 0.5, 0.0, 1});
  EXPECT_EQ(out.dataset, clean);
  EXPECT_EQ(std::count(out.labels.begin(), out.labels.end(), 1), 10);
}

TEST(InjectSpatial, PerturbationArithmetic) {
  auto ds = empty_dataset(2);
  ds.snapshots.push_back(slice(ds, Timestamp::from_civil(2019, 1, 7, 0), {{{0, 1}, 200.0}}));
  ds.snapshots.push_back(slice(ds, Timestamp::from_civil(2019, 1, 7, 1), {{{0, 1}, 200.0}}));
  const auto out = inject_spatial(ds, {0.5, 1.0, 0.5, 11});
  for (std::size_t t = 0; t < 2; ++t) {
    if (!out.labels[t]) continue;
    const double tau = out.dataset.snapshots[t].edges[0].travel_time;
    EXPECT_GE(tau, 100.0);
    EXPECT_LE(tau, 300.0);
    EXPECT_EQ(out.dataset.snapshots[t].edges[0].weight, ds.scaler.scale(tau));
  }
  EXPECT_EQ(ds.scaler.scale(300.0), (1.0 / 300.0 - 1.0 / 1000.0) / (1.0 / 50.0 - 1.0 / 1000.0));
}

TEST(InjectTemporal, TwelveHourShiftAndInvolution) {
  const auto clean = random_clean(100, 5);
  const InjectionConfig cfg{0.1, 0.5, 0.2, 13};
  const auto once = inject_temporal(clean, cfg);
  EXPECT_EQ(std::count(once.labels.begin(), once.labels.end(), 1), 10);
  for (std::size_t t = 0; t < 100; ++t) {
    const auto& a = clean.snapshots[t];
    const auto& b = once.dataset.snapshots[t];
    EXPECT_EQ(a.edges, b.edges);
    EXPECT_EQ(a.timestamp, b.timestamp);
    if (once.labels[t]) {
      EXPECT_EQ(b.context.hour, (a.context.hour + 12) % 24);
      EXPECT_EQ(b.context.dow, a.context.dow);
      if (a.context.hour == 20) EXPECT_EQ(b.context.hour, 8);
      if (a.context.hour == 8) EXPECT_EQ(b.context.hour, 20);
    } else {
      EXPECT_EQ(a, b);
    }
  }
  const auto twice = inject_temporal(once.dataset, cfg);
  EXPECT_EQ(twice.dataset, clean);
}

TEST(Inject, RejectsEmptyOrBadFractions) {
  const auto clean = random_clean(20, 6);
  EXPECT_THROW(inject_spatial(clean, {0.0, 0.5, 0.2, 1}), ConfigError);
  EXPECT_THROW(inject_temporal(clean, {1.0, 0.5, 0.2, 1}), ConfigError);
  EXPECT_THROW(inject_spatial(clean, {0.1, 1.5, 0.2, 1}), ConfigError);
  EXPECT_EQ(anomaly_type_from_string("temporal"), AnomalyType::temporal);
  EXPECT_THROW(anomaly_type_from_string("spectral"), ConfigError);
}

TEST(HistoricalAverage, Examples) {
  auto train = empty_dataset(3);
  const auto mon8 = Timestamp::from_civil(2019, 1, 7, 8);
  train.snapshots.push_back(slice(train, mon8, {{{0, 1}, 300.0}, {{1, 2}, 400.0}}));
  train.snapshots.push_back(slice(train, mon8.plus_hours(12), {{{0, 1}, 180.0}, {{1, 2}, 250.0}}));
  const auto stats = HourOfWeekStats::fit(train);

  auto test = empty_dataset(3);
  const auto next = mon8.plus_hours(168);
  test.snapshots.push_back(slice(test, next, {{{0, 1}, 300.0}, {{1, 2}, 400.0}}));
  test.snapshots.push_back(slice(test, next.plus_hours(1), {{{0, 1}, 300.0}}));
  auto ha = ha_scores(test, stats);
  EXPECT_EQ(ha.scores[0], 0.0);
  EXPECT_EQ(ha.scores[1], 0.0);
  EXPECT_EQ(ha.unmatched_snapshots, 1u);

  test.snapshots[0].edges[0].travel_time = 360.0;
  EXPECT_EQ(ha_scores(test, stats).scores[0], 1800.0);

  // A rush-hour slice moved to 20:00 is compared with the evening means.
  test.snapshots[0].edges[0].travel_time = 300.0;
  auto shifted = test;
  shifted.snapshots[0].context.hour = 20;
  EXPECT_GT(ha_scores(shifted, stats).scores[0], ha_scores(test, stats).scores[0]);
  EXPECT_EQ(ha_scores(shifted, stats).scores[0], (120.0 * 120.0 + 150.0 * 150.0) / 2.0);
}

TEST(AnomalyScore, EqualsEvalLossAndIgnoresEdgeOrder) {
  RngStream rng(8);
  auto m = random_model(6, "congae", rng);
  auto s = random_snapshot(6, 0.5, rng);
  RngStream r;
  const double score = anomaly_score(s, m);
  EXPECT_EQ(score, graph_loss(s, s.edges, m, RunMode::eval(), r));
  EXPECT_EQ(score, anomaly_score(s, m));
  auto shuffled = s;
  std::reverse(shuffled.edges.begin(), shuffled.edges.end());
  EXPECT_EQ(anomaly_score(shuffled, m), score);
}

TEST(AnomalyScore, EmptySnapshotsAreSkipped) {
  RngStream rng(9);
  auto ds = random_clean(4, 9);
  ds.snapshots[2].edges.clear();
  auto m = random_model(5, "congae", rng);
  auto scores = anomaly_scores(ds, m, 2);
  EXPECT_TRUE(scores[0].has_value());
  EXPECT_FALSE(scores[2].has_value());
  EXPECT_THROW(anomaly_score(ds.snapshots[2], m), DataError);
}

TEST(AnomalyScore, MemorizedSliceScoresBelowTrainingMean) {
  RngStream rng(10);
  auto ds = empty_dataset(5);
  auto memorized = random_snapshot(5, 0.7, rng, {9, 2});
  const auto start = Timestamp::from_civil(2019, 1, 7, 0);
  for (int t = 0; t < 30; ++t) {
    auto s = t % 3 == 2 ? random_snapshot(5, 0.7, rng, {t % 24, 2}) : memorized;
    s.timestamp = start.plus_hours(t);
    ds.snapshots.push_back(s);
  }
  TrainConfig cfg;
  cfg.dims = congae::testing::tiny_dims(true);
  cfg.dims.layer_dims = {8, 8};
  cfg.dims.graph_dim = 8;
  cfg.dims.edge_hidden_dim = 16;
  cfg.epochs = 150;
  cfg.early_stop_patience = 0;
  cfg.p_drop = cfg.p_e_drop = 0.0;
  cfg.learning_rate = 1e-2;
  cfg.batch_size = 5;
  cfg.seed = 2;
  auto result = train(ds, cfg);
  const auto scores = anomaly_scores(ds, result.model);
  double sum = 0;
  for (const auto& s : scores) sum += *s;
  EXPECT_LT(anomaly_score(memorized, result.model), sum / static_cast<double>(scores.size()));
}

TEST(EvaluateGrid, DeterministicAndConsistent) {
  const auto city = generate_city(congae::testing::small_city(3, 2));
  const auto full = congae::testing::dataset_from_city(city);
  Dataset train_ds = full, raw_test = full;
  train_ds.snapshots.assign(full.snapshots.begin(), full.snapshots.begin() + 336);
  raw_test.snapshots.assign(full.snapshots.begin() + 336, full.snapshots.end());
  TrainConfig cfg;
  cfg.dims = congae::testing::tiny_dims(true);
  cfg.epochs = 2;
  cfg.learning_rate = 1e-2;
  auto model = train(train_ds, cfg).model;
  const std::vector<NamedModel> models{{"congae", model}};
  const auto stats = HourOfWeekStats::fit(train_ds);
  EvaluationInputs in;
  in.models = models;
  in.ha_stats = &stats;
  in.raw_test = &raw_test;
  in.repeats = 2;
  in.seed = 4;
  const std::vector<ExperimentCell> grid{{AnomalyType::spatial, 0.5, 0.1, 0.05},
                                         {AnomalyType::spatial, 0.5, 0.1, 0.1},
                                         {AnomalyType::spatial, 0.5, 0.1, 0.2}};
  const auto a = evaluate_grid(in, grid);
  const auto b = evaluate_grid(in, grid);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  ASSERT_EQ(a.rows.size(), 6u);
  for (const auto& r : a.rows) {
    ASSERT_EQ(r.aucs.size(), 2u);
    EXPECT_NEAR(r.auc_mean, (r.aucs[0] + r.aucs[1]) / 2.0, 1e-12);
    EXPECT_NEAR(r.auc_std, sample_stddev(r.aucs), 1e-12);
  }
  for (double g : {0.05, 0.1, 0.2}) {
    EXPECT_NE(a.find(AnomalyType::spatial, 0.5, 0.1, g, "congae"), nullptr);
    EXPECT_NE(a.find(AnomalyType::spatial, 0.5, 0.1, g, "ha"), nullptr);
  }
  EXPECT_EQ(a.to_csv().substr(0, a.to_csv().find('\n')),
            "anomaly_type,alpha,beta,gamma,method,auc_mean,auc_std,repeats,seed");
}
