#pragma once

#include <span>
#include <vector>

#include "congae/matrix.hpp"
#include "congae/params.hpp"
#include "congae/rng.hpp"

namespace congae {

inline constexpr double kNormalizeEpsilon = 1e-12;

/// y = U x (bias-free).
std::vector<double> linear(const Param& u, std::span<const double> x);
/// y = U x + b; an empty bias is treated as zero.
std::vector<double> affine(const Param& u, std::span<const double> bias, std::span<const double> x);

std::vector<double> relu(std::span<const double> x);
double sigmoid(double x);
std::vector<double> sigmoid(std::span<const double> x);
/// x / max(||x||, eps); the zero vector maps to itself.
std::vector<double> l2_normalize(std::span<const double> x, double eps = kNormalizeEpsilon);

/// Backward of l2_normalize: given input x and upstream gradient g, returns dL/dx.
std::vector<double> l2_normalize_backward(std::span<const double> x, std::span<const double> g,
                                          double eps = kNormalizeEpsilon);

/// Inverted-dropout multipliers: each entry is 0 with probability p, otherwise
/// 1/(1-p). Inference mode or p == 0 yields all ones and draws nothing.
std::vector<double> dropout_mask(std::size_t n, double p, RngStream& rng, bool training);

std::vector<double> dropout(std::span<const double> x, double p, RngStream& rng, bool training);

}  // namespace congae
