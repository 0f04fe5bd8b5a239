#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dlord/tensor.hpp"

namespace dlord::ad {

/// Per-parameter Adam moments plus the shared hyperparameters.
struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t t = 0;
  std::vector<double> m;
  std::vector<double> v;

  void init(std::size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
    t = 0;
  }
};

/// One bias-corrected Adam update. Deterministic given inputs.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

/// Keeps one AdamState per registered tensor and steps them in registration
/// order, which fixes the floating-point reduction order run to run.
class ParamOptimizer {
 public:
  ParamOptimizer() = default;
  ParamOptimizer(double lr, double beta1, double beta2) : lr_(lr), beta1_(beta1), beta2_(beta2) {}

  void add(const TensorPtr& param);
  void step();
  void zero_grad();

  std::size_t size() const { return params_.size(); }
  const std::vector<TensorPtr>& params() const { return params_; }
  std::vector<AdamState>& states() { return states_; }
  const std::vector<AdamState>& states() const { return states_; }

 private:
  double lr_ = 1e-4;
  double beta1_ = 0.5;
  double beta2_ = 0.999;
  std::vector<TensorPtr> params_;
  std::vector<AdamState> states_;
};

}  // namespace dlord::ad
