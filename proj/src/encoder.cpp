#include "congae/encoder.hpp"

#include <algorithm>
#include <numeric>

#include "congae/error.hpp"
#include "congae/ops.hpp"

namespace congae {

AggregationPlan AggregationPlan::build(const ODSnapshot& snapshot, bool weighted) {
  AggregationPlan plan;
  plan.in.resize(snapshot.node_count);
  plan.normalizer.assign(snapshot.node_count, 0.0);
  std::vector<std::size_t> order(snapshot.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = snapshot.edges[a];
    const auto& eb = snapshot.edges[b];
    return ea.dest != eb.dest ? ea.dest < eb.dest : ea.origin < eb.origin;
  });
  for (auto k : order) {
    const auto& e = snapshot.edges[k];
    require_dims(e.dest < snapshot.node_count && e.origin < snapshot.node_count,
                 "edge references a node outside the snapshot");
    plan.in[e.dest].push_back({e.origin, weighted ? e.weight : 1.0});
  }
  for (std::size_t i = 0; i < plan.in.size(); ++i) {
    double s = 0.0;
    for (const auto& t : plan.in[i]) s += t.weight;
    plan.normalizer[i] = s;
  }
  return plan;
}

Matrix AggregationPlan::apply(const Matrix& h) const {
  require_dims(h.rows() == in.size(), "aggregation input has wrong node count");
  Matrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (normalizer[i] == 0.0) continue;
    auto dst = out.row(i);
    for (const auto& t : in[i]) {
      auto src = h.row(t.source);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += t.weight * src[c];
    }
    for (auto& v : dst) v /= normalizer[i];
  }
  return out;
}

void AggregationPlan::apply_backward(const Matrix& d_agg, Matrix& d_h) const {
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (normalizer[i] == 0.0) continue;
    auto g = d_agg.row(i);
    for (const auto& t : in[i]) {
      const double coef = t.weight / normalizer[i];
      auto dst = d_h.row(t.source);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += coef * g[c];
    }
  }
}

std::vector<double> weighted_mean_aggregate(std::size_t target, const ODSnapshot& snapshot,
                                            const Matrix& h) {
  require_dims(h.rows() == snapshot.node_count, "embedding rows must equal node count");
  require_dims(target < snapshot.node_count, "target node out of range");
  const auto plan = AggregationPlan::build(snapshot, true);
  std::vector<double> out(h.cols(), 0.0);
  if (plan.normalizer[target] == 0.0) return out;
  for (const auto& t : plan.in[target]) {
    auto src = h.row(t.source);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += t.weight * src[c];
  }
  for (auto& v : out) v /= plan.normalizer[target];
  return out;
}

namespace {

void normalize_and_drop(LayerTrace& lt, RunMode mode, RngStream& rng) {
  const std::size_t n = lt.activated.rows(), d = lt.activated.cols();
  lt.output = Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto y = l2_normalize(lt.activated.row(i));
    std::copy(y.begin(), y.end(), lt.output.row(i).begin());
  }
  auto mask = dropout_mask(n * d, mode.p_drop, rng, mode.training);
  lt.mask = Matrix(n, d, std::move(mask));
  auto out = lt.output.flat();
  auto m = lt.mask.flat();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= m[k];
}

LayerTrace layer_forward(const ConGaeModel& model, std::size_t l, const AggregationPlan& plan,
                         const Matrix& h, RunMode mode, RngStream& rng) {
  const auto& dims = model.dims();
  const std::size_t n = model.num_nodes();
  const std::size_t din = dims.layer_input_dim(l), dout = dims.layer_dims.at(l);
  require_dims(h.rows() == n && h.cols() == din,
               "layer " + std::to_string(l) + " expects " + std::to_string(n) + "x" +
                   std::to_string(din) + " input");
  const Param& u = model.param(model.layer_slot(l));
  LayerTrace lt;
  lt.input = h;
  if (model.variant().graph_layers == GraphLayers::fully_connected) {
    lt.concat = Matrix(1, n * din, h.values());
    auto a = linear(u, lt.concat.row(0));
    lt.activated = Matrix(n, dout, relu(a));
  } else {
    const Matrix agg = plan.apply(h);
    lt.concat = Matrix(n, 2 * din);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = lt.concat.row(i);
      std::copy(h.row(i).begin(), h.row(i).end(), dst.begin());
      std::copy(agg.row(i).begin(), agg.row(i).end(), dst.begin() + static_cast<std::ptrdiff_t>(din));
    }
    require_dims(u.value.cols() == 2 * din && u.value.rows() == dout, "sage weight shape");
    Matrix a = matmul_nt(lt.concat, u.value);
    for (auto& v : a.flat()) v = v > 0.0 ? v : 0.0;
    lt.activated = std::move(a);
  }
  normalize_and_drop(lt, mode, rng);
  return lt;
}

/// Returns dL/d(input); skips the input gradient when `need_input_grad` is false.
Matrix layer_backward(const ConGaeModel& model, std::size_t l, const AggregationPlan& plan,
                      const LayerTrace& lt, const Matrix& d_out, GradientBuffer& grads,
                      bool need_input_grad) {
  const std::size_t n = lt.activated.rows(), dout = lt.activated.cols();
  const std::size_t din = lt.input.cols();
  const std::size_t slot = model.layer_slot(l);
  const Param& u = model.param(slot);
  Matrix d_pre(n, dout);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> g(dout);
    for (std::size_t c = 0; c < dout; ++c) g[c] = d_out(i, c) * lt.mask(i, c);
    auto dr = l2_normalize_backward(lt.activated.row(i), g);
    for (std::size_t c = 0; c < dout; ++c) d_pre(i, c) = lt.activated(i, c) > 0.0 ? dr[c] : 0.0;
  }
  Matrix d_in(n, din);
  if (model.variant().graph_layers == GraphLayers::fully_connected) {
    outer_add(grads[slot], d_pre.flat(), lt.concat.row(0));
    if (need_input_grad) matvec_transposed_add(u.value, d_pre.flat(), d_in.flat());
    return d_in;
  }
  matmul_tn_add(grads[slot], d_pre, lt.concat);
  if (!need_input_grad) return d_in;
  const Matrix d_concat = matmul_nn(d_pre, u.value);
  Matrix d_agg(n, din);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = d_concat.row(i);
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(din), d_in.row(i).begin());
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(din), src.end(), d_agg.row(i).begin());
  }
  plan.apply_backward(d_agg, d_in);
  return d_in;
}

}  // namespace

Matrix sage_layer(const ConGaeModel& model, std::size_t layer, const ODSnapshot& snapshot,
                  const Matrix& h, RunMode mode, RngStream& rng) {
  require_dims(model.has_graph_layers(), "model variant has no graph layers");
  require_dims(snapshot.node_count == model.num_nodes(), "snapshot node count does not match model");
  const auto plan = AggregationPlan::build(
      snapshot, model.variant().graph_layers == GraphLayers::weighted_sage);
  return layer_forward(model, layer, plan, h, mode, rng).output;
}

ContextVectors context_lookup(TimeContext ctx, const ConGaeModel& model, RunMode mode, RngStream& rng) {
  if (!ctx.valid()) throw DomainError("time context out of range");
  const auto& dims = model.dims();
  ContextVectors cv;
  cv.context = ctx;
  if (!model.variant().use_context) {
    cv.active = false;
    cv.hour.assign(dims.hour_dim, 0.0);
    cv.week.assign(dims.week_dim, 0.0);
    cv.hour_mask.assign(dims.hour_dim, 0.0);
    cv.week_mask.assign(dims.week_dim, 0.0);
    return cv;
  }
  auto hour_row = model.param(model.hour_slot()).value.row(static_cast<std::size_t>(ctx.hour));
  auto week_row = model.param(model.week_slot()).value.row(static_cast<std::size_t>(ctx.dow));
  cv.hour_mask = dropout_mask(hour_row.size(), mode.p_drop, rng, mode.training);
  cv.week_mask = dropout_mask(week_row.size(), mode.p_drop, rng, mode.training);
  cv.hour.resize(hour_row.size());
  cv.week.resize(week_row.size());
  for (std::size_t k = 0; k < hour_row.size(); ++k) cv.hour[k] = hour_row[k] * cv.hour_mask[k];
  for (std::size_t k = 0; k < week_row.size(); ++k) cv.week[k] = week_row[k] * cv.week_mask[k];
  return cv;
}

std::vector<double> graph_embed(const Matrix& node_embeddings, std::span<const double> hour,
                                std::span<const double> week, const ConGaeModel& model) {
  require_dims(node_embeddings.rows() == model.num_nodes() &&
                   node_embeddings.cols() == model.dims().node_dim(),
               "node embedding matrix shape");
  const auto input = concat({node_embeddings.flat(), hour, week});
  return relu(affine(model.param(model.graph_slot()), model.bias(model.graph_slot()), input));
}

EncoderTrace encode_traced(const ODSnapshot& snapshot, const ConGaeModel& model, RunMode mode,
                           RngStream& rng) {
  require_dims(snapshot.node_count == model.num_nodes(),
               "snapshot has " + std::to_string(snapshot.node_count) + " nodes, model expects " +
                   std::to_string(model.num_nodes()));
  EncoderTrace tr;
  const auto& dims = model.dims();
  const auto kind = model.variant().graph_layers;
  if (kind == GraphLayers::weighted_sage || kind == GraphLayers::plain_sage)
    tr.plan = AggregationPlan::build(snapshot, kind == GraphLayers::weighted_sage);
  if (model.has_graph_layers()) {
    const Matrix* h = &model.node_features();
    for (std::size_t l = 0; l < dims.layer_dims.size(); ++l) {
      tr.layers.push_back(layer_forward(model, l, tr.plan, *h, mode, rng));
      h = &tr.layers.back().output;
    }
    tr.node_embeddings = tr.layers.back().output;
  } else {
    tr.node_embeddings = Matrix(model.num_nodes(), dims.node_dim());
  }
  tr.context = context_lookup(snapshot.context, model, mode, rng);
  tr.graph_input = concat({tr.node_embeddings.flat(), tr.context.hour, tr.context.week});
  tr.graph_embedding =
      relu(affine(model.param(model.graph_slot()), model.bias(model.graph_slot()), tr.graph_input));
  return tr;
}

std::vector<double> encode(const ODSnapshot& snapshot, const ConGaeModel& model, RunMode mode,
                           RngStream& rng) {
  return encode_traced(snapshot, model, mode, rng).graph_embedding;
}

void encode_backward(const EncoderTrace& tr, const ConGaeModel& model,
                     std::span<const double> d_graph_embedding, std::span<const double> d_hour_extra,
                     std::span<const double> d_week_extra, GradientBuffer& grads) {
  const auto& dims = model.dims();
  const std::size_t n = model.num_nodes(), dl = dims.node_dim();
  std::vector<double> d_pre(d_graph_embedding.begin(), d_graph_embedding.end());
  for (std::size_t k = 0; k < d_pre.size(); ++k)
    if (!(tr.graph_embedding[k] > 0.0)) d_pre[k] = 0.0;
  outer_add(grads[model.graph_slot()], d_pre, tr.graph_input);
  if (model.has_bias()) {
    auto d_bias = grads[model.graph_slot() + 1].flat();
    for (std::size_t k = 0; k < d_pre.size(); ++k) d_bias[k] += d_pre[k];
  }
  std::vector<double> d_input(tr.graph_input.size(), 0.0);
  matvec_transposed_add(model.param(model.graph_slot()).value, d_pre, d_input);

  if (tr.context.active) {
    const std::size_t hour_off = n * dl, week_off = hour_off + dims.hour_dim;
    auto hour_grad = grads[model.hour_slot()].row(static_cast<std::size_t>(tr.context.context.hour));
    auto week_grad = grads[model.week_slot()].row(static_cast<std::size_t>(tr.context.context.dow));
    for (std::size_t k = 0; k < dims.hour_dim; ++k) {
      const double extra = d_hour_extra.empty() ? 0.0 : d_hour_extra[k];
      hour_grad[k] += (d_input[hour_off + k] + extra) * tr.context.hour_mask[k];
    }
    for (std::size_t k = 0; k < dims.week_dim; ++k) {
      const double extra = d_week_extra.empty() ? 0.0 : d_week_extra[k];
      week_grad[k] += (d_input[week_off + k] + extra) * tr.context.week_mask[k];
    }
  }

  if (!model.has_graph_layers()) return;
  Matrix d_h(n, dl, std::vector<double>(d_input.begin(), d_input.begin() + static_cast<std::ptrdiff_t>(n * dl)));
  for (std::size_t l = tr.layers.size(); l-- > 0;)
    d_h = layer_backward(model, l, tr.plan, tr.layers[l], d_h, grads, l > 0);
}

}  // namespace congae
