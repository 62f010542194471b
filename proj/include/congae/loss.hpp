#pragma once

#include <span>
#include <vector>

#include "congae/model.hpp"
#include "congae/od_graph.hpp"
#include "congae/params.hpp"
#include "congae/rng.hpp"

namespace congae {

struct MaskedSnapshot {
  ODSnapshot input;          // kept edges, weights unchanged
  std::vector<Edge> targets; // the full original edge set
};

/// Drops each input edge independently with probability p. Targets always
/// keep every original edge, so masked edges are still supervised.
MaskedSnapshot edge_dropout(const ODSnapshot& snapshot, double p, RngStream& rng);

/// Mean squared error between target weights and predictions.
double reconstruction_error(std::span<const Edge> targets, std::span<const double> predictions);

/// (1/|T|) sum over targets of (w_ij - w'_ij)^2, encoding `input` and decoding
/// at the target pairs. Throws DataError when `targets` is empty.
double graph_loss(const ODSnapshot& input, std::span<const Edge> targets, const ConGaeModel& model,
                  RunMode mode, RngStream& rng);

/// Same loss; adds `scale * dL/dtheta` into `grads`.
double accumulate_loss_gradients(const ODSnapshot& input, std::span<const Edge> targets,
                                 const ConGaeModel& model, RunMode mode, RngStream& rng,
                                 GradientBuffer& grads, double scale = 1.0);

/// Zeroes and then fills the gradient slots of `model.params()`; returns the loss.
double loss_gradients(ConGaeModel& model, const ODSnapshot& input, std::span<const Edge> targets,
                      RunMode mode, RngStream& rng);

}  // namespace congae
