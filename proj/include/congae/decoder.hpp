#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "congae/matrix.hpp"
#include "congae/model.hpp"
#include "congae/od_graph.hpp"
#include "congae/params.hpp"

namespace congae {

using EdgeQuery = std::pair<std::uint32_t, std::uint32_t>;

/// relu(U'_G concat(h_G, h_hour, h_week)) unstacked into N rows of width d_L.
/// Context is replaced by zeros when the variant does not condition the decoder.
Matrix decode_nodes(std::span<const double> graph_embedding, std::span<const double> hour,
                    std::span<const double> week, const ConGaeModel& model);

/// sigmoid(U2 relu(U1 concat(h_i, h_j))). Not symmetric in (i, j).
double predict_edge(std::span<const double> h_i, std::span<const double> h_j, const ConGaeModel& model);

/// Predicted weights for each query, in query order (eval-mode context lookup).
std::vector<double> reconstruct(std::span<const double> graph_embedding, TimeContext ctx,
                                std::span<const EdgeQuery> queries, const ConGaeModel& model);

struct DecoderTrace {
  std::vector<double> input;      // concat(h_G, context used by the decoder)
  std::vector<double> recovered;  // post-ReLU, N * d_L
  Matrix nodes;                   // N x d_L view of `recovered`
  Matrix source_proj;             // N x d_e: U1[:, :d_L] h_i
  Matrix dest_proj;               // N x d_e: U1[:, d_L:] h_j
};

DecoderTrace decode_traced(std::span<const double> graph_embedding, std::span<const double> hour,
                           std::span<const double> week, const ConGaeModel& model);

/// Hidden activations and output for one queried edge.
struct EdgeForward {
  std::vector<double> hidden;
  double weight;
};
EdgeForward edge_forward(const DecoderTrace& trace, std::uint32_t i, std::uint32_t j,
                         const ConGaeModel& model);

struct DecoderInputGrads {
  std::vector<double> graph_embedding;
  std::vector<double> hour;  // empty when the decoder does not see context
  std::vector<double> week;
};

/// Backward through the edge MLP and node recovery. `d_weights[k]` is dL/dw'
/// for `queries[k]`; `forwards[k]` is the matching edge_forward result.
DecoderInputGrads decode_backward(const DecoderTrace& trace, std::span<const EdgeQuery> queries,
                                  std::span<const EdgeForward> forwards,
                                  std::span<const double> d_weights, const ConGaeModel& model,
                                  GradientBuffer& grads);

}  // namespace congae
