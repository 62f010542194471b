#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "congae/matrix.hpp"
#include "congae/params.hpp"
#include "congae/rng.hpp"

namespace congae {

enum class GraphLayers { weighted_sage, plain_sage, fully_connected, none };

std::string_view to_string(GraphLayers g);
GraphLayers graph_layers_from_string(std::string_view s);

/// Architecture switches for the ablation variants.
struct ModelVariant {
  bool use_context = true;
  GraphLayers graph_layers = GraphLayers::weighted_sage;
  bool context_in_decoder = true;

  /// congae | sp | t | fc | noncontextdec | nonweightedenc
  static ModelVariant named(std::string_view name);
  /// Canonical name when the variant matches one of the named ablations,
  /// otherwise "custom".
  std::string name() const;
  void validate() const;

  bool operator==(const ModelVariant&) const = default;
};

struct ModelDims {
  std::size_t feature_dim = 4;
  /// Output width of each graph layer; the last entry is the node embedding width.
  std::vector<std::size_t> layer_dims{300, 150};
  std::size_t hour_dim = 100;
  std::size_t week_dim = 100;
  std::size_t graph_dim = 150;
  std::size_t edge_hidden_dim = 150;
  /// Adds a bias row to the graph, recovery and edge MLP maps.
  bool use_bias = false;

  std::size_t node_dim() const { return layer_dims.back(); }
  std::size_t layer_input_dim(std::size_t l) const { return l == 0 ? feature_dim : layer_dims[l - 1]; }
  void validate() const;

  bool operator==(const ModelDims&) const = default;
};

/// Training-time switches for one forward pass.
struct RunMode {
  bool training = false;
  double p_drop = 0.0;

  static RunMode eval() { return {}; }
  static RunMode train(double p_drop) { return {true, p_drop}; }
};

/// Architecture plus parameter store. Parameter names:
///   encoder.sage.<l> | encoder.fc.<l>, encoder.hour_table, encoder.week_table,
///   encoder.graph, decoder.graph, decoder.edge_hidden, decoder.edge_out
/// With dims.use_bias each of the last four is followed by a `<name>_bias`
/// row vector (slot + 1).
class ConGaeModel {
 public:
  /// Matrices get Glorot-uniform init, context tables N(0, 1).
  static ConGaeModel create(const ModelDims& dims, const ModelVariant& variant,
                            Matrix node_features, RngStream& init_rng);

  const ModelDims& dims() const noexcept { return dims_; }
  const ModelVariant& variant() const noexcept { return variant_; }
  std::size_t num_nodes() const noexcept { return node_features_.rows(); }
  const Matrix& node_features() const noexcept { return node_features_; }

  ModelParams& params() noexcept { return params_; }
  const ModelParams& params() const noexcept { return params_; }

  bool has_graph_layers() const { return variant_.graph_layers != GraphLayers::none; }
  std::size_t layer_slot(std::size_t l) const { return layer_slots_.at(l); }
  std::size_t hour_slot() const noexcept { return hour_slot_; }
  std::size_t week_slot() const noexcept { return week_slot_; }
  std::size_t graph_slot() const noexcept { return graph_slot_; }
  std::size_t ungraph_slot() const noexcept { return ungraph_slot_; }
  std::size_t edge_hidden_slot() const noexcept { return edge_hidden_slot_; }
  std::size_t edge_out_slot() const noexcept { return edge_out_slot_; }

  const Param& param(std::size_t slot) const { return params_[slot]; }
  bool has_bias() const noexcept { return dims_.use_bias; }
  /// Bias of the map at `slot`; empty without biases.
  std::span<const double> bias(std::size_t slot) const {
    return dims_.use_bias ? params_[slot + 1].value.flat() : std::span<const double>{};
  }

 private:
  ModelDims dims_;
  ModelVariant variant_;
  Matrix node_features_;
  ModelParams params_;
  std::vector<std::size_t> layer_slots_;
  std::size_t hour_slot_ = 0, week_slot_ = 0, graph_slot_ = 0, ungraph_slot_ = 0;
  std::size_t edge_hidden_slot_ = 0, edge_out_slot_ = 0;
};

}  // namespace congae
