#include "congae/anomaly_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "congae/error.hpp"
#include "congae/loss.hpp"
#include "congae/parallel.hpp"
#include "congae/rng.hpp"
#include "text.hpp"

namespace congae {
namespace {

constexpr double kMinTravelTime = 1.0;

// Stream keys for per-repeat randomness.
enum StreamKey : std::uint64_t { kResampleStream = 21, kInjectStream = 22 };

std::vector<std::size_t> choose_without_replacement(std::size_t n, std::size_t k, RngStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<std::size_t> choose_slices(const Dataset& clean, const InjectionConfig& cfg, RngStream& rng) {
  cfg.validate();
  const std::size_t t = clean.snapshots.size();
  const std::size_t k = round_count(cfg.gamma, t);
  if (k == 0 || k >= t)
    throw ConfigError("gamma = " + text::format_double(cfg.gamma) + " over " + std::to_string(t) +
                      " slices selects " + std::to_string(k) + "; both classes are needed");
  return choose_without_replacement(t, k, rng);
}

}  // namespace

void LabeledDataset::validate() const {
  dataset.validate();
  if (labels.size() != dataset.snapshots.size())
    throw DataError("label count " + std::to_string(labels.size()) + " does not match snapshot count " +
                    std::to_string(dataset.snapshots.size()));
  for (int l : labels)
    if (l != 0 && l != 1) throw DataError("labels must be 0 or 1");
}

std::string_view to_string(AnomalyType t) { return t == AnomalyType::spatial ? "spatial" : "temporal"; }

AnomalyType anomaly_type_from_string(std::string_view s) {
  if (s == "spatial") return AnomalyType::spatial;
  if (s == "temporal") return AnomalyType::temporal;
  throw ConfigError("unknown anomaly type '" + std::string(s) + "' (expected spatial or temporal)");
}

void InjectionConfig::validate() const {
  for (auto [name, v] : {std::pair{"gamma", gamma}, {"alpha", alpha}, {"beta", beta}})
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

std::size_t round_count(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
}

HourOfWeekStats HourOfWeekStats::fit(const Dataset& ds) {
  std::map<Key, std::vector<double>> samples;
  for (const auto& s : ds.snapshots)
    for (const auto& e : s.edges) samples[{e.origin, e.dest, s.context.hour, s.context.dow}].push_back(e.travel_time);

  HourOfWeekStats stats;
  stats.node_count_ = ds.node_count();
  for (auto& [key, xs] : samples) {
    Cell c;
    c.count = xs.size();
    c.mean = mean(xs);
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - c.mean) * (x - c.mean);
      c.variance = ss / static_cast<double>(xs.size() - 1);
    }
    stats.cells_.emplace(key, c);
  }
  return stats;
}

const HourOfWeekStats::Cell* HourOfWeekStats::find(std::uint32_t origin, std::uint32_t dest, TimeContext ctx) const {
  auto it = cells_.find({origin, dest, ctx.hour, ctx.dow});
  return it == cells_.end() ? nullptr : &it->second;
}

double anomaly_score(const ODSnapshot& snapshot, const ConGaeModel& model) {
  RngStream unused;
  return graph_loss(snapshot, snapshot.edges, model, RunMode::eval(), unused);
}

std::vector<std::optional<double>> anomaly_scores(const Dataset& ds, const ConGaeModel& model, std::size_t threads) {
  std::vector<std::optional<double>> out(ds.snapshots.size());
  parallel_for(out.size(), threads, [&](std::size_t t) {
    if (!ds.snapshots[t].edges.empty()) out[t] = anomaly_score(ds.snapshots[t], model);
  });
  return out;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DimensionError("roc_auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw DomainError("roc_auc: NaN score");
    (labels[i] != 0 ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) throw DomainError("roc_auc is undefined with a single class");
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  // Twice the Mann-Whitney statistic, kept integral so ties are exact.
  std::uint64_t twice_u = 0, neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t p = 0, n = 0;
    for (; j < order.size() && scores[order[j]] == scores[order[i]]; ++j) (labels[order[j]] != 0 ? p : n) += 1;
    twice_u += 2 * p * neg_below + p * n;
    neg_below += n;
    i = j;
  }
  return static_cast<double>(twice_u) / static_cast<double>(2 * pos * neg);
}

Dataset synth_clean_testset(std::span<const ODRecord> raw_test_records, std::span<const ZoneFeatures> zones,
                            const WeightScaler& scaler, std::uint64_t seed) {
  return synth_clean_testset(
      build_snapshots(raw_test_records, std::vector<ZoneFeatures>(zones.begin(), zones.end()), scaler), seed);
}

Dataset synth_clean_testset(const Dataset& raw_test, std::uint64_t seed) {
  if (raw_test.snapshots.empty()) throw DataError("raw test period is empty");
  const auto first = raw_test.snapshots.front().timestamp;
  const auto last = raw_test.snapshots.back().timestamp;
  const auto span_hours = last.hours_since_epoch() - first.hours_since_epoch() + 1;
  if (span_hours < 168)
    throw DataError("raw test period covers " + std::to_string(span_hours) + " hours; at least one week is needed");

  const auto stats = HourOfWeekStats::fit(raw_test);
  // Regroup cells by (hour, dow) so each slice walks its cells in (dest, origin) order.
  std::map<std::pair<int, int>, std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, HourOfWeekStats::Cell>>>
      by_context;
  for (const auto& [key, cell] : stats.cells()) {
    const auto [o, d, h, w] = key;
    by_context[{h, w}].push_back({{d, o}, cell});
  }
  for (auto& [_, cells] : by_context) std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  Dataset out;
  out.zones = raw_test.zones;
  out.scaler = raw_test.scaler;
  RngStream rng = RngStream(seed).fork({kResampleStream});
  for (std::int64_t k = 0; k < span_hours; ++k) {
    ODSnapshot s;
    s.node_count = raw_test.node_count();
    s.timestamp = first.plus_hours(k);
    s.context = time_context(s.timestamp);
    if (auto it = by_context.find({s.context.hour, s.context.dow}); it != by_context.end()) {
      for (const auto& [pair, cell] : it->second) {
        const double draw = cell.variance > 0.0 ? rng.normal(cell.mean, std::sqrt(cell.variance)) : cell.mean;
        const double tau = std::max(draw, kMinTravelTime);
        s.edges.push_back({pair.second, pair.first, out.scaler.scale(tau), tau});
      }
    }
    out.snapshots.push_back(std::move(s));
  }
  return out;
}

LabeledDataset inject_spatial(const Dataset& clean, const InjectionConfig& cfg) {
  RngStream rng(cfg.seed);
  LabeledDataset out{clean, std::vector<int>(clean.snapshots.size(), 0)};
  for (std::size_t t : choose_slices(clean, cfg, rng)) {
    out.labels[t] = 1;
    auto& edges = out.dataset.snapshots[t].edges;
    for (std::size_t e : choose_without_replacement(edges.size(), round_count(cfg.alpha, edges.size()), rng)) {
      const double u = rng.uniform(-cfg.beta, cfg.beta);
      edges[e].travel_time = std::max(edges[e].travel_time * (1.0 + u), kMinTravelTime);
      edges[e].weight = out.dataset.scaler.scale(edges[e].travel_time);
    }
  }
  return out;
}

LabeledDataset inject_temporal(const Dataset& clean, const InjectionConfig& cfg) {
  RngStream rng(cfg.seed);
  LabeledDataset out{clean, std::vector<int>(clean.snapshots.size(), 0)};
  for (std::size_t t : choose_slices(clean, cfg, rng)) {
    out.labels[t] = 1;
    auto& ctx = out.dataset.snapshots[t].context;
    ctx.hour = (ctx.hour + 12) % 24;
  }
  return out;
}

LabeledDataset inject(AnomalyType type, const Dataset& clean, const InjectionConfig& cfg) {
  return type == AnomalyType::spatial ? inject_spatial(clean, cfg) : inject_temporal(clean, cfg);
}

HaScores ha_scores(const Dataset& test, const HourOfWeekStats& train_stats) {
  HaScores out;
  out.scores.reserve(test.snapshots.size());
  for (const auto& s : test.snapshots) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& e : s.edges) {
      if (const auto* cell = train_stats.find(e.origin, e.dest, s.context)) {
        const double d = e.travel_time - cell->mean;
        sum += d * d;
        ++n;
      }
    }
    if (n == 0) ++out.unmatched_snapshots;
    out.scores.push_back(n == 0 ? 0.0 : sum / static_cast<double>(n));
  }
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

const ResultRow* ResultsTable::find(AnomalyType type, double alpha, double beta, double gamma,
                                    std::string_view method) const {
  for (const auto& r : rows)
    if (r.type == type && r.alpha == alpha && r.beta == beta && r.gamma == gamma && r.method == method) return &r;
  return nullptr;
}

std::string ResultsTable::to_csv() const {
  using text::format_double;
  std::ostringstream os;
  os << "anomaly_type,alpha,beta,gamma,method,auc_mean,auc_std,repeats,seed\n";
  for (const auto& r : rows)
    os << to_string(r.type) << ',' << format_double(r.alpha) << ',' << format_double(r.beta) << ','
       << format_double(r.gamma) << ',' << r.method << ',' << format_double(r.auc_mean) << ','
       << format_double(r.auc_std) << ',' << r.repeats << ',' << r.seed << '\n';
  return os.str();
}

namespace {

// AUC over the snapshots that received a score.
double auc_of(const std::vector<std::optional<double>>& scores, const std::vector<int>& labels) {
  std::vector<double> s;
  std::vector<int> l;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i]) {
      s.push_back(*scores[i]);
      l.push_back(labels[i]);
    }
  return roc_auc(s, l);
}

}  // namespace

ResultsTable evaluate_grid(const EvaluationInputs& in, std::span<const ExperimentCell> grid) {
  if (in.repeats == 0) throw ConfigError("repeats must be at least 1");
  if (!in.raw_test) throw ConfigError("evaluate_grid needs raw test data");

  std::vector<std::string> methods;
  for (const auto& m : in.models) methods.push_back(m.name);
  if (in.ha_stats) methods.emplace_back("ha");

  ResultsTable table;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto& cell = grid[c];
    std::vector<std::vector<double>> aucs(methods.size());
    for (std::size_t r = 0; r < in.repeats; ++r) {
      const Dataset clean = synth_clean_testset(*in.raw_test, mix_seed(in.seed, {kResampleStream, c, r}));
      InjectionConfig icfg{cell.gamma, cell.alpha, cell.beta, mix_seed(in.seed, {kInjectStream, c, r})};
      const LabeledDataset test = inject(cell.type, clean, icfg);
      for (std::size_t m = 0; m < in.models.size(); ++m)
        aucs[m].push_back(auc_of(anomaly_scores(test.dataset, in.models[m].model, in.threads), test.labels));
      if (in.ha_stats) {
        const auto ha = ha_scores(test.dataset, *in.ha_stats);
        aucs.back().push_back(roc_auc(ha.scores, test.labels));
      }
    }
    for (std::size_t m = 0; m < methods.size(); ++m)
      table.rows.push_back({cell.type, cell.alpha, cell.beta, cell.gamma, methods[m], mean(aucs[m]),
                            sample_stddev(aucs[m]), in.repeats, in.seed, aucs[m]});
  }
  return table;
}

ResultsTable run_experiment(const Dataset& train_ds, std::span<const ODRecord> raw_test_records,
                            std::span<const ExperimentCell> grid, std::size_t repeats,
                            const TrainConfig& model_cfg, std::span<const std::string> variants) {
  std::vector<NamedModel> models;
  for (const auto& v : variants) {
    TrainConfig cfg = model_cfg;
    cfg.variant = ModelVariant::named(v);
    models.push_back({v, train(train_ds, cfg).model});
  }
  const auto raw_test = build_snapshots(raw_test_records, train_ds.zones, train_ds.scaler);
  const auto stats = HourOfWeekStats::fit(train_ds);
  EvaluationInputs in;
  in.models = models;
  in.ha_stats = &stats;
  in.raw_test = &raw_test;
  in.repeats = repeats;
  in.seed = model_cfg.seed;
  in.threads = model_cfg.threads;
  return evaluate_grid(in, grid);
}

}  // namespace congae
