#include "congae/adam.hpp"

#include <cmath>

#include "congae/error.hpp"

namespace congae {

AdamState AdamState::for_params(const ModelParams& params, double learning_rate, double beta1,
                                double beta2, double epsilon) {
  AdamState s;
  s.learning_rate = learning_rate;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  for (const auto& p : params) {
    s.m.emplace_back(p.value.rows(), p.value.cols());
    s.v.emplace_back(p.value.rows(), p.value.cols());
  }
  return s;
}

void adam_step(ModelParams& params, AdamState& state) {
  require_dims(state.m.size() == params.size() && state.v.size() == params.size(),
               "adam state does not match parameters");
  for (const auto& p : params) {
    if (!p.grad.all_finite()) throw NumericError("non-finite gradient in parameter '" + p.name + "'");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto value = params[i].value.flat();
    auto grad = params[i].grad.flat();
    auto m = state.m[i].flat();
    auto v = state.v[i].flat();
    require_dims(m.size() == value.size(), "adam moment shape for '" + params[i].name + "'");
    for (std::size_t k = 0; k < value.size(); ++k) {
      const double g = grad[k];
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g;
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      value[k] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
      grad[k] = 0.0;
    }
  }
}

}  // namespace congae
