#pragma once

#include "stainlab/tensor.hpp"

namespace stainlab {

inline constexpr double kNormEps = 1e-5;

enum class Padding { same, valid };

// Cross-correlation (deep-learning convention, no kernel flip).
// input [H,W,Cin], kernel [kh,kw,Cin,Cout] with odd kh,kw.
// `same` zero-pads to preserve H,W; `valid` shrinks to H-kh+1, W-kw+1.
Tensor conv2d(const Tensor& input, const Tensor& kernel, Padding padding);

// Per-channel reductions over the spatial grid: [H,W,C] -> [C].
Tensor avg_pool_global(const Tensor& x);
Tensor max_pool_global(const Tensor& x);

// Per-channel standardization over H*W (instance) or over all H*W*C (layer).
// Variance uses the population (1/N) convention; eps floors the denominator.
Tensor instance_norm(const Tensor& x, double eps = kNormEps);
Tensor layer_norm(const Tensor& x, double eps = kNormEps);

// Softmax along the trailing axis, max-stabilized.
Tensor softmax(const Tensor& scores);

// a.b / (|a||b|); throws DegenerateInputError on a zero-norm operand.
double cosine_sim(const Tensor& a, const Tensor& b);

}  // namespace stainlab
