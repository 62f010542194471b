#include "congae/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace congae {

double finite_diff_check(const std::function<double(const ModelParams&)>& loss,
                         ModelParams& params, double h, std::span<const ParamCoord> coords) {
  double worst = 0.0;
  for (const auto& c : coords) {
    auto value = params[c.param].value.flat();
    const double saved = value[c.index];
    value[c.index] = saved + h;
    const double up = loss(params);
    value[c.index] = saved - h;
    const double down = loss(params);
    value[c.index] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = params[c.param].grad.flat()[c.index];
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

std::vector<ParamCoord> sample_coords(const ModelParams& params, std::size_t per_param,
                                      RngStream& rng) {
  std::vector<ParamCoord> out;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const std::size_t n = params[p].value.size();
    if (n <= per_param) {
      for (std::size_t i = 0; i < n; ++i) out.push_back({p, i});
    } else {
      for (std::size_t k = 0; k < per_param; ++k) out.push_back({p, rng.below(n)});
    }
  }
  return out;
}

}  // namespace congae
