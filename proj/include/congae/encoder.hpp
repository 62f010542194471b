#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "congae/matrix.hpp"
#include "congae/model.hpp"
#include "congae/od_graph.hpp"
#include "congae/params.hpp"
#include "congae/rng.hpp"

namespace congae {

/// In-neighbour lists of a snapshot: for each target node i, the sources j of
/// edges e_ji with their weights, ordered by j. Weighted plans normalize by the
/// weight sum; plain plans use 1/in-degree. Targets with no in-edge or an
/// all-zero weight sum aggregate to the zero vector.
struct AggregationPlan {
  struct Term {
    std::uint32_t source;
    double weight;
  };
  std::vector<std::vector<Term>> in;
  std::vector<double> normalizer;  // divisor per target, 0 when empty

  static AggregationPlan build(const ODSnapshot& snapshot, bool weighted);

  /// Row i = sum_j weight_ji H_j / normalizer_i.
  Matrix apply(const Matrix& h) const;
  /// dH += adjoint of apply.
  void apply_backward(const Matrix& d_agg, Matrix& d_h) const;
};

std::vector<double> weighted_mean_aggregate(std::size_t target, const ODSnapshot& snapshot,
                                            const Matrix& h);

/// Intermediate values of one graph layer, kept for the backward pass.
struct LayerTrace {
  Matrix input;       // N x d_l
  Matrix concat;      // N x 2 d_l (sage) or 1 x N d_l (fully connected)
  Matrix activated;   // N x d_{l+1}, post-ReLU, pre-normalization
  Matrix mask;        // N x d_{l+1} dropout multipliers
  Matrix output;      // N x d_{l+1}
};

/// Graph layer l of the model's variant (sage or fully connected).
Matrix sage_layer(const ConGaeModel& model, std::size_t layer, const ODSnapshot& snapshot,
                  const Matrix& h, RunMode mode, RngStream& rng);

struct ContextVectors {
  std::vector<double> hour;  // after dropout
  std::vector<double> week;
  std::vector<double> hour_mask;
  std::vector<double> week_mask;
  TimeContext context;
  bool active = true;  // false when the variant zero-substitutes context
};

/// Rows hour_table[ctx.hour] and week_table[ctx.dow], dropout in training.
/// Variants without context get zero vectors and draw nothing.
ContextVectors context_lookup(TimeContext ctx, const ConGaeModel& model, RunMode mode, RngStream& rng);

/// relu(U_G concat(H_L[0], ..., H_L[N-1], h_hour, h_week)).
std::vector<double> graph_embed(const Matrix& node_embeddings, std::span<const double> hour,
                                std::span<const double> week, const ConGaeModel& model);

struct EncoderTrace {
  AggregationPlan plan;
  std::vector<LayerTrace> layers;
  Matrix node_embeddings;  // H_L (zeros when the variant has no graph layers)
  ContextVectors context;
  std::vector<double> graph_input;
  std::vector<double> graph_embedding;
};

EncoderTrace encode_traced(const ODSnapshot& snapshot, const ConGaeModel& model, RunMode mode,
                           RngStream& rng);

/// Graph embedding h_G for a snapshot. Dropout draws happen in a fixed order:
/// layer outputs first, then hour and week vectors.
std::vector<double> encode(const ODSnapshot& snapshot, const ConGaeModel& model, RunMode mode,
                           RngStream& rng);

/// Accumulates parameter gradients given dL/dh_G and any extra gradient
/// reaching the (post-dropout) context vectors from the decoder.
void encode_backward(const EncoderTrace& trace, const ConGaeModel& model,
                     std::span<const double> d_graph_embedding, std::span<const double> d_hour_extra,
                     std::span<const double> d_week_extra, GradientBuffer& grads);

}  // namespace congae
