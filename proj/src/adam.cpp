#include "dlord/adam.hpp"

#include <cmath>

#include "dlord/errors.hpp"

namespace dlord::ad {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  const std::size_t n = params.size();
  if (grads.size() != n) throw InvalidArgument("adam_step: gradient size mismatch");
  if (state.m.size() != n || state.v.size() != n)
    throw InvalidArgument("adam_step: moment buffers do not match parameter size");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

void ParamOptimizer::add(const TensorPtr& param) {
  param->ensure_grad();
  params_.push_back(param);
  AdamState s;
  s.lr = lr_;
  s.beta1 = beta1_;
  s.beta2 = beta2_;
  s.init(param->values.size());
  states_.push_back(std::move(s));
}

void ParamOptimizer::step() {
  for (std::size_t i = 0; i < params_.size(); ++i)
    adam_step(params_[i]->values, params_[i]->grad, states_[i]);
}

void ParamOptimizer::zero_grad() {
  for (auto& p : params_) p->zero_grad();
}

}  // namespace dlord::ad
