#include "congae/decoder.hpp"

#include "congae/encoder.hpp"
#include "congae/error.hpp"
#include "congae/ops.hpp"

namespace congae {
namespace {

bool decoder_sees_context(const ConGaeModel& model) {
  return model.variant().use_context && model.variant().context_in_decoder;
}

/// U1[:, offset : offset + h.size()] h, the shared kernel for both halves.
std::vector<double> half_projection(const Matrix& u1, std::size_t offset, std::span<const double> h) {
  std::vector<double> out(u1.rows(), 0.0);
  for (std::size_t r = 0; r < u1.rows(); ++r) {
    auto row = u1.row(r);
    double s = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) s += row[offset + k] * h[k];
    out[r] = s;
  }
  return out;
}

double edge_output(std::span<const double> src, std::span<const double> dst, const ConGaeModel& model,
                   std::vector<double>* hidden) {
  const Matrix& u2 = model.param(model.edge_out_slot()).value;
  const auto b1 = model.bias(model.edge_hidden_slot());
  double logit = model.has_bias() ? model.bias(model.edge_out_slot())[0] : 0.0;
  for (std::size_t r = 0; r < src.size(); ++r) {
    const double a = src[r] + dst[r] + (b1.empty() ? 0.0 : b1[r]);
    const double s = a > 0.0 ? a : 0.0;
    if (hidden) (*hidden)[r] = s;
    logit += u2(0, r) * s;
  }
  return sigmoid(logit);
}

}  // namespace

DecoderTrace decode_traced(std::span<const double> graph_embedding, std::span<const double> hour,
                           std::span<const double> week, const ConGaeModel& model) {
  const auto& dims = model.dims();
  require_dims(graph_embedding.size() == dims.graph_dim, "graph embedding length");
  require_dims(hour.size() == dims.hour_dim && week.size() == dims.week_dim, "context vector length");
  DecoderTrace tr;
  if (decoder_sees_context(model)) {
    tr.input = concat({graph_embedding, hour, week});
  } else {
    tr.input = concat({graph_embedding});
    tr.input.resize(dims.graph_dim + dims.hour_dim + dims.week_dim, 0.0);
  }
  tr.recovered = relu(affine(model.param(model.ungraph_slot()), model.bias(model.ungraph_slot()), tr.input));
  const std::size_t n = model.num_nodes(), dl = dims.node_dim();
  tr.nodes = Matrix(n, dl, tr.recovered);
  const Matrix& u1 = model.param(model.edge_hidden_slot()).value;
  tr.source_proj = Matrix(n, dims.edge_hidden_dim);
  tr.dest_proj = Matrix(n, dims.edge_hidden_dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = half_projection(u1, 0, tr.nodes.row(i));
    auto d = half_projection(u1, dl, tr.nodes.row(i));
    std::copy(s.begin(), s.end(), tr.source_proj.row(i).begin());
    std::copy(d.begin(), d.end(), tr.dest_proj.row(i).begin());
  }
  return tr;
}

Matrix decode_nodes(std::span<const double> graph_embedding, std::span<const double> hour,
                    std::span<const double> week, const ConGaeModel& model) {
  return decode_traced(graph_embedding, hour, week, model).nodes;
}

double predict_edge(std::span<const double> h_i, std::span<const double> h_j, const ConGaeModel& model) {
  const std::size_t dl = model.dims().node_dim();
  require_dims(h_i.size() == dl && h_j.size() == dl, "edge predictor expects two d_L embeddings");
  const Matrix& u1 = model.param(model.edge_hidden_slot()).value;
  const auto src = half_projection(u1, 0, h_i);
  const auto dst = half_projection(u1, dl, h_j);
  return edge_output(src, dst, model, nullptr);
}

EdgeForward edge_forward(const DecoderTrace& trace, std::uint32_t i, std::uint32_t j,
                         const ConGaeModel& model) {
  EdgeForward f;
  f.hidden.resize(trace.source_proj.cols());
  f.weight = edge_output(trace.source_proj.row(i), trace.dest_proj.row(j), model, &f.hidden);
  return f;
}

std::vector<double> reconstruct(std::span<const double> graph_embedding, TimeContext ctx,
                                std::span<const EdgeQuery> queries, const ConGaeModel& model) {
  const std::size_t n = model.num_nodes();
  for (const auto& [i, j] : queries)
    if (i >= n || j >= n)
      throw DataError("edge query (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") references a node outside [0, " + std::to_string(n) + ")");
  std::vector<double> out;
  out.reserve(queries.size());
  if (queries.empty()) return out;
  RngStream unused;
  const auto cv = context_lookup(ctx, model, RunMode::eval(), unused);
  const auto tr = decode_traced(graph_embedding, cv.hour, cv.week, model);
  for (const auto& [i, j] : queries) out.push_back(edge_output(tr.source_proj.row(i), tr.dest_proj.row(j), model, nullptr));
  return out;
}

DecoderInputGrads decode_backward(const DecoderTrace& tr, std::span<const EdgeQuery> queries,
                                  std::span<const EdgeForward> forwards,
                                  std::span<const double> d_weights, const ConGaeModel& model,
                                  GradientBuffer& grads) {
  const auto& dims = model.dims();
  const std::size_t n = model.num_nodes(), dl = dims.node_dim(), de = dims.edge_hidden_dim;
  const Matrix& u1 = model.param(model.edge_hidden_slot()).value;
  const Matrix& u2 = model.param(model.edge_out_slot()).value;
  Matrix& g_u2 = grads[model.edge_out_slot()];
  const bool biased = model.has_bias();
  double g_b2 = 0.0;
  std::vector<double> g_b1(de, 0.0);
  Matrix d_src(n, de), d_dst(n, de);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& f = forwards[q];
    const double d_logit = d_weights[q] * f.weight * (1.0 - f.weight);
    if (d_logit == 0.0) continue;
    g_b2 += d_logit;
    auto ds = d_src.row(queries[q].first);
    auto dd = d_dst.row(queries[q].second);
    for (std::size_t r = 0; r < de; ++r) {
      g_u2(0, r) += d_logit * f.hidden[r];
      if (f.hidden[r] > 0.0) {
        const double g = d_logit * u2(0, r);
        ds[r] += g;
        dd[r] += g;
        g_b1[r] += g;
      }
    }
  }
  if (biased) {
    grads[model.edge_out_slot() + 1](0, 0) += g_b2;
    auto gb = grads[model.edge_hidden_slot() + 1].flat();
    for (std::size_t r = 0; r < de; ++r) gb[r] += g_b1[r];
  }
  // U1 = [A | B]; src = A h_i, dst = B h_j.
  Matrix& g_u1 = grads[model.edge_hidden_slot()];
  std::vector<double> d_recovered(n * dl, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto h = tr.nodes.row(i);
    auto ds = d_src.row(i);
    auto dd = d_dst.row(i);
    std::span<double> dh(d_recovered.data() + i * dl, dl);
    for (std::size_t r = 0; r < de; ++r) {
      if (ds[r] == 0.0 && dd[r] == 0.0) continue;
      auto grow = g_u1.row(r);
      auto urow = u1.row(r);
      for (std::size_t k = 0; k < dl; ++k) {
        grow[k] += ds[r] * h[k];
        grow[dl + k] += dd[r] * h[k];
        dh[k] += ds[r] * urow[k] + dd[r] * urow[dl + k];
      }
    }
  }
  for (std::size_t k = 0; k < d_recovered.size(); ++k)
    if (!(tr.recovered[k] > 0.0)) d_recovered[k] = 0.0;
  outer_add(grads[model.ungraph_slot()], d_recovered, tr.input);
  if (biased) {
    auto g_bu = grads[model.ungraph_slot() + 1].flat();
    for (std::size_t k = 0; k < d_recovered.size(); ++k) g_bu[k] += d_recovered[k];
  }
  std::vector<double> d_input(tr.input.size(), 0.0);
  matvec_transposed_add(model.param(model.ungraph_slot()).value, d_recovered, d_input);

  DecoderInputGrads out;
  out.graph_embedding.assign(d_input.begin(), d_input.begin() + static_cast<std::ptrdiff_t>(dims.graph_dim));
  if (decoder_sees_context(model)) {
    auto h0 = d_input.begin() + static_cast<std::ptrdiff_t>(dims.graph_dim);
    out.hour.assign(h0, h0 + static_cast<std::ptrdiff_t>(dims.hour_dim));
    out.week.assign(h0 + static_cast<std::ptrdiff_t>(dims.hour_dim), d_input.end());
  }
  return out;
}

}  // namespace congae
