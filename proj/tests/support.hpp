#pragma once

// Small random models and snapshots shared by the unit and acceptance tests.

#include <string>
#include <vector>

#include "congae/model.hpp"
#include "congae/od_graph.hpp"
#include "congae/rng.hpp"
#include "congae/synthetic.hpp"

namespace congae::testing {

inline ModelDims tiny_dims(bool bias = false) {
  ModelDims d;
  d.layer_dims = {6, 4};
  d.hour_dim = 3;
  d.week_dim = 2;
  d.graph_dim = 5;
  d.edge_hidden_dim = 4;
  d.use_bias = bias;
  return d;
}

inline Matrix random_features(std::size_t n, RngStream& rng) {
  Matrix x(n, 4);
  for (auto& v : x.flat()) v = rng.uniform();
  return x;
}

/// Model with random weights; biases (when enabled) are drawn away from zero.
inline ConGaeModel random_model(std::size_t n, const std::string& variant, RngStream& rng,
                                const ModelDims& dims = tiny_dims()) {
  auto m = ConGaeModel::create(dims, ModelVariant::named(variant), random_features(n, rng), rng);
  for (auto& p : m.params())
    if (p.name.ends_with("_bias"))
      for (auto& v : p.value.flat()) v = rng.uniform(-0.5, 0.5);
  return m;
}

/// Directed snapshot keeping each off-diagonal pair with probability `density`.
inline ODSnapshot random_snapshot(std::size_t n, double density, RngStream& rng, TimeContext ctx = {7, 2}) {
  ODSnapshot s;
  s.node_count = n;
  s.context = ctx;
  s.timestamp = Timestamp::from_civil(2019, 1, 9, ctx.hour);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (i != j && rng.uniform() < density) s.edges.push_back({i, j, rng.uniform(), 100.0 + 100.0 * rng.uniform()});
  if (s.edges.empty()) s.edges.push_back({0, 1, 0.5, 150.0});
  s.canonicalize();
  return s;
}

/// Small synthetic city: 3 x 2 zones over `weeks` weeks.
inline SyntheticCityConfig small_city(int weeks, std::uint64_t seed = 0) {
  SyntheticCityConfig c;
  c.zones_x = 3;
  c.zones_y = 2;
  c.weeks = weeks;
  c.roadworks.clear();
  c.seed = seed;
  return c;
}

inline Dataset dataset_from_city(const SyntheticCity& city) {
  std::vector<std::string> ids;
  for (const auto& z : city.zones) ids.push_back(z.zone_id);
  auto zones = prepare_zones(city.zones, ids);
  return build_snapshots(city.records, zones, fit_weight_scaler(city.records));
}

}  // namespace congae::testing
