#include "congae/loss.hpp"

#include "congae/decoder.hpp"
#include "congae/encoder.hpp"
#include "congae/error.hpp"
#include "congae/ops.hpp"

namespace congae {
namespace {

struct Forward {
  EncoderTrace encoder;
  DecoderTrace decoder;
  std::vector<EdgeQuery> queries;
  std::vector<EdgeForward> edges;
  double loss = 0.0;
};

Forward forward(const ODSnapshot& input, std::span<const Edge> targets, const ConGaeModel& model,
                RunMode mode, RngStream& rng) {
  if (targets.empty())
    throw DataError("snapshot " + input.timestamp.to_string() + " has no target edges");
  Forward f;
  f.encoder = encode_traced(input, model, mode, rng);
  f.decoder = decode_traced(f.encoder.graph_embedding, f.encoder.context.hour,
                            f.encoder.context.week, model);
  const std::size_t n = model.num_nodes();
  f.queries.reserve(targets.size());
  f.edges.reserve(targets.size());
  double sum = 0.0;
  for (const auto& e : targets) {
    if (e.origin >= n || e.dest >= n) throw DataError("target edge references an unknown node");
    f.queries.emplace_back(e.origin, e.dest);
    f.edges.push_back(edge_forward(f.decoder, e.origin, e.dest, model));
    const double r = e.weight - f.edges.back().weight;
    sum += r * r;
  }
  f.loss = sum / static_cast<double>(targets.size());
  return f;
}

}  // namespace

MaskedSnapshot edge_dropout(const ODSnapshot& snapshot, double p, RngStream& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("edge dropout probability must lie in [0, 1)");
  MaskedSnapshot m;
  m.targets = snapshot.edges;
  m.input.node_count = snapshot.node_count;
  m.input.context = snapshot.context;
  m.input.timestamp = snapshot.timestamp;
  if (p == 0.0) {
    m.input.edges = snapshot.edges;
    return m;
  }
  for (const auto& e : snapshot.edges)
    if (!rng.bernoulli(p)) m.input.edges.push_back(e);
  return m;
}

double reconstruction_error(std::span<const Edge> targets, std::span<const double> predictions) {
  require_dims(targets.size() == predictions.size(), "one prediction per target edge");
  if (targets.empty()) throw DataError("reconstruction error of an empty edge set");
  double sum = 0.0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double r = targets[k].weight - predictions[k];
    sum += r * r;
  }
  return sum / static_cast<double>(targets.size());
}

double graph_loss(const ODSnapshot& input, std::span<const Edge> targets, const ConGaeModel& model,
                  RunMode mode, RngStream& rng) {
  return forward(input, targets, model, mode, rng).loss;
}

double accumulate_loss_gradients(const ODSnapshot& input, std::span<const Edge> targets,
                                 const ConGaeModel& model, RunMode mode, RngStream& rng,
                                 GradientBuffer& grads, double scale) {
  const Forward f = forward(input, targets, model, mode, rng);
  std::vector<double> d_weights(targets.size());
  const double inv = 2.0 * scale / static_cast<double>(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k)
    d_weights[k] = inv * (f.edges[k].weight - targets[k].weight);
  const auto d_dec = decode_backward(f.decoder, f.queries, f.edges, d_weights, model, grads);
  encode_backward(f.encoder, model, d_dec.graph_embedding, d_dec.hour, d_dec.week, grads);
  return f.loss;
}

double loss_gradients(ConGaeModel& model, const ODSnapshot& input, std::span<const Edge> targets,
                      RunMode mode, RngStream& rng) {
  GradientBuffer grads(model.params());
  const double loss = accumulate_loss_gradients(input, targets, model, mode, rng, grads);
  model.params().zero_grad();
  grads.add_to(model.params());
  return loss;
}

}  // namespace congae
