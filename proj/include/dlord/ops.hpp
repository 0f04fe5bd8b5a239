#pragma once

#include <utility>
#include <vector>

#include "dlord/tensor.hpp"

namespace dlord::ad {

// Differentiable primitives. Each op validates shapes, computes the forward
// value, and records one backward closure on the tape. Gradients accumulate
// additively, so a tensor feeding several ops receives the sum of the
// contributions.

/// 1D cross-correlation. input [C_in, L], weight [C_out, C_in, K],
/// bias [C_out] -> [C_out, L_out] with L_out = (L + 2*padding - K)/stride + 1.
TensorPtr conv1d(Tape& tape, const TensorPtr& input, const TensorPtr& weight,
                 const TensorPtr& bias, int stride, int padding);

/// weight [N_out, N_in] * input [N_in] + bias [N_out] -> [N_out]
TensorPtr linear(Tape& tape, const TensorPtr& input, const TensorPtr& weight,
                 const TensorPtr& bias);

TensorPtr leaky_relu(Tape& tape, const TensorPtr& x, double negative_slope = 0.2);
TensorPtr tanh_act(Tape& tape, const TensorPtr& x);
TensorPtr exp_elem(Tape& tape, const TensorPtr& x);

/// Instance normalization over the temporal axis followed by the per-channel
/// affine (gamma, beta). features [C, L], gamma [C], beta [C].
TensorPtr adain(Tape& tape, const TensorPtr& features, const TensorPtr& gamma,
                const TensorPtr& beta, double eps = 1e-5);

/// Repeat each temporal sample `scale` times. [C, L] -> [C, L*scale].
TensorPtr upsample_nearest(Tape& tape, const TensorPtr& x, int scale);

TensorPtr add(Tape& tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(Tape& tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(Tape& tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr square(Tape& tape, const TensorPtr& x);

/// Join two rank-1 tensors end to end.
TensorPtr concat(Tape& tape, const TensorPtr& a, const TensorPtr& b);

/// Contiguous rank-1 window [offset, offset+length).
TensorPtr slice(Tape& tape, const TensorPtr& x, std::int64_t offset, std::int64_t length);

/// Same data, new shape (sizes must match).
TensorPtr reshape(Tape& tape, const TensorPtr& x, std::vector<std::int64_t> shape);

TensorPtr sum_all(Tape& tape, const TensorPtr& x);
TensorPtr mean_all(Tape& tape, const TensorPtr& x);

/// sqrt(sum(x^2) + 1e-12); the epsilon keeps the gradient finite at 0.
TensorPtr l2norm(Tape& tape, const TensorPtr& x);

/// a*x + b elementwise with scalar constants.
TensorPtr scale_shift(Tape& tape, const TensorPtr& x, double a, double b);

/// Mean squared error over all elements of two same-shaped tensors.
TensorPtr mse(Tape& tape, const TensorPtr& a, const TensorPtr& b);

/// Temporal variance of bone lengths of a motion tensor laid out [3J, T]
/// (channel = marker*3 + axis): sum over bones b of
/// (1/(T-1)) * sum_t (len[t,b] - mean_t len[:,b])^2.
TensorPtr skeleton_consistency(Tape& tape, const TensorPtr& motion,
                               const std::vector<std::pair<int, int>>& edges);

/// Closed-form KL(N(mu, exp(logvar)) || N(0, I)) summed over dimensions.
TensorPtr gaussian_kl(Tape& tape, const TensorPtr& mu, const TensorPtr& logvar);

/// Numerically stable -log softmax(logits)[label].
TensorPtr cross_entropy_logits(Tape& tape, const TensorPtr& logits, int label);

}  // namespace dlord::ad
