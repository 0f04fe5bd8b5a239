#pragma once

#include <functional>
#include <vector>

#include "dlord/tensor.hpp"

namespace dlord::ad {

/// Scalar-valued function of one tensor, evaluated on a caller-provided tape.
using ScalarFn = std::function<TensorPtr(Tape&, const TensorPtr&)>;

/// Compare reverse-mode gradients of f at `point` against central finite
/// differences (f(x+h) - f(x-h)) / 2h, elementwise. Returns the max relative
/// error with denominator max(|analytic|, |numeric|, 1e-8). Throws
/// NumericError if any evaluation of f is non-finite.
double grad_check(const ScalarFn& f, const TensorPtr& point, double h = 1e-5);

/// Same comparison for a function of several leaves, probing only the listed
/// (leaf index, element index) positions. Used for large parameter sets where
/// perturbing every element is pointless.
using MultiScalarFn = std::function<TensorPtr(Tape&)>;
double grad_check_multi(const MultiScalarFn& f, const std::vector<TensorPtr>& leaves,
                        const std::vector<std::pair<std::size_t, std::size_t>>& probes,
                        double h = 1e-5);

}  // namespace dlord::ad
