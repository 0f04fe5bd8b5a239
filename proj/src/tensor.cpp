#include "dlord/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "dlord/errors.hpp"

namespace dlord::ad {

std::int64_t shape_size(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 0) throw InvalidArgument("tensor shape has negative dimension");
    n *= d;
  }
  return n;
}

TensorPtr Tensor::zeros(std::vector<std::int64_t> shape, bool requires_grad) {
  auto t = std::make_shared<Tensor>();
  const std::int64_t n = shape_size(shape);
  t->shape = std::move(shape);
  t->values.assign(static_cast<std::size_t>(n), 0.0);
  t->requires_grad = requires_grad;
  if (requires_grad) t->ensure_grad();
  return t;
}

TensorPtr Tensor::from(std::vector<std::int64_t> shape, std::vector<double> values,
                       bool requires_grad) {
  const std::int64_t n = shape_size(shape);
  if (n != static_cast<std::int64_t>(values.size()))
    throw InvalidArgument("tensor value count does not match shape product");
  auto t = std::make_shared<Tensor>();
  t->shape = std::move(shape);
  t->values = std::move(values);
  t->requires_grad = requires_grad;
  if (requires_grad) t->ensure_grad();
  return t;
}

TensorPtr Tensor::scalar(double value, bool requires_grad) {
  return from({1}, {value}, requires_grad);
}

double Tensor::item() const {
  if (!is_scalar()) throw InvalidArgument("item() called on non-scalar tensor");
  return values[0];
}

void Tensor::ensure_grad() {
  if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
}

void Tensor::zero_grad() {
  std::fill(grad.begin(), grad.end(), 0.0);
}

bool Tensor::values_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

TensorPtr Tape::record(TensorPtr output, std::function<void()> backward) {
  nodes_.push_back(Node{output, std::move(backward)});
  return nodes_.back().output;
}

void Tape::backward(const TensorPtr& loss) {
  if (!loss || !loss->is_scalar())
    throw InvalidArgument("backward requires a scalar loss tensor");
  for (auto& node : nodes_) {
    node.output->ensure_grad();
    node.output->zero_grad();
  }
  loss->ensure_grad();
  loss->grad[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) it->backward();
}

void Tape::clear() { nodes_.clear(); }

}  // namespace dlord::ad
