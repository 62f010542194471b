#include "congae/model.hpp"

#include "congae/error.hpp"

namespace congae {

std::string_view to_string(GraphLayers g) {
  switch (g) {
    case GraphLayers::weighted_sage: return "weighted_sage";
    case GraphLayers::plain_sage: return "plain_sage";
    case GraphLayers::fully_connected: return "fully_connected";
    case GraphLayers::none: return "none";
  }
  return "none";
}

GraphLayers graph_layers_from_string(std::string_view s) {
  if (s == "weighted_sage") return GraphLayers::weighted_sage;
  if (s == "plain_sage") return GraphLayers::plain_sage;
  if (s == "fully_connected") return GraphLayers::fully_connected;
  if (s == "none") return GraphLayers::none;
  throw ConfigError("unknown graph layer type '" + std::string(s) + "'");
}

ModelVariant ModelVariant::named(std::string_view name) {
  ModelVariant v;
  if (name == "congae") return v;
  if (name == "sp") {
    v.use_context = false;
  } else if (name == "t") {
    v.graph_layers = GraphLayers::none;
  } else if (name == "fc") {
    v.graph_layers = GraphLayers::fully_connected;
  } else if (name == "noncontextdec") {
    v.context_in_decoder = false;
  } else if (name == "nonweightedenc") {
    v.graph_layers = GraphLayers::plain_sage;
  } else {
    throw ConfigError("unknown model variant '" + std::string(name) + "'");
  }
  return v;
}

std::string ModelVariant::name() const {
  for (const char* n : {"congae", "sp", "t", "fc", "noncontextdec", "nonweightedenc"})
    if (named(n) == *this) return n;
  return "custom";
}

void ModelVariant::validate() const {
  if (!use_context && graph_layers == GraphLayers::none)
    throw ConfigError("model variant disables both context and graph layers");
}

void ModelDims::validate() const {
  if (feature_dim == 0 || layer_dims.empty() || hour_dim == 0 || week_dim == 0 || graph_dim == 0 ||
      edge_hidden_dim == 0)
    throw ConfigError("all model dimensions must be at least 1");
  for (auto d : layer_dims)
    if (d == 0) throw ConfigError("all model dimensions must be at least 1");
}

ConGaeModel ConGaeModel::create(const ModelDims& dims, const ModelVariant& variant,
                                Matrix node_features, RngStream& init_rng) {
  dims.validate();
  variant.validate();
  require_dims(node_features.cols() == dims.feature_dim,
               "node features have " + std::to_string(node_features.cols()) +
                   " columns, model expects " + std::to_string(dims.feature_dim));
  if (node_features.rows() == 0) throw ConfigError("model needs at least one node");

  ConGaeModel m;
  m.dims_ = dims;
  m.variant_ = variant;
  m.node_features_ = std::move(node_features);
  const std::size_t n = m.node_features_.rows();
  const std::size_t dl = dims.node_dim();

  auto glorot = [&](std::size_t r, std::size_t c) {
    Matrix w(r, c);
    init_glorot_uniform(w, init_rng);
    return w;
  };
  auto normal = [&](std::size_t r, std::size_t c) {
    Matrix w(r, c);
    init_normal(w, init_rng, 1.0);
    return w;
  };

  for (std::size_t l = 0; l < dims.layer_dims.size(); ++l) {
    const std::size_t din = dims.layer_input_dim(l), dout = dims.layer_dims[l];
    switch (variant.graph_layers) {
      case GraphLayers::weighted_sage:
      case GraphLayers::plain_sage:
        m.layer_slots_.push_back(m.params_.add("encoder.sage." + std::to_string(l), glorot(dout, 2 * din)));
        break;
      case GraphLayers::fully_connected:
        m.layer_slots_.push_back(m.params_.add("encoder.fc." + std::to_string(l), glorot(n * dout, n * din)));
        break;
      case GraphLayers::none:
        break;
    }
  }
  m.hour_slot_ = m.params_.add("encoder.hour_table", normal(24, dims.hour_dim));
  m.week_slot_ = m.params_.add("encoder.week_table", normal(7, dims.week_dim));
  const std::size_t ctx = dims.hour_dim + dims.week_dim;
  m.graph_slot_ = m.params_.add("encoder.graph", glorot(dims.graph_dim, n * dl + ctx));
  if (dims.use_bias) m.params_.add("encoder.graph_bias", Matrix(1, dims.graph_dim));
  m.ungraph_slot_ = m.params_.add("decoder.graph", glorot(n * dl, dims.graph_dim + ctx));
  if (dims.use_bias) m.params_.add("decoder.graph_bias", Matrix(1, n * dl));
  m.edge_hidden_slot_ = m.params_.add("decoder.edge_hidden", glorot(dims.edge_hidden_dim, 2 * dl));
  if (dims.use_bias) m.params_.add("decoder.edge_hidden_bias", Matrix(1, dims.edge_hidden_dim));
  m.edge_out_slot_ = m.params_.add("decoder.edge_out", glorot(1, dims.edge_hidden_dim));
  if (dims.use_bias) m.params_.add("decoder.edge_out_bias", Matrix(1, 1));
  return m;
}

}  // namespace congae
