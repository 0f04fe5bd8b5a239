#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace dlord::ad {

class Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

std::int64_t shape_size(const std::vector<std::int64_t>& shape);

/// Dense row-major tensor of 64-bit floats with an optional gradient buffer.
///
/// Tensors are shared between the tape nodes that produced and consume them;
/// parameters are long-lived leaves with requires_grad set, intermediates are
/// created by ops and live as long as their tape.
class Tensor {
 public:
  std::vector<std::int64_t> shape;
  std::vector<double> values;
  bool requires_grad = false;
  std::vector<double> grad;  // empty until ensure_grad()

  static TensorPtr zeros(std::vector<std::int64_t> shape, bool requires_grad = false);
  static TensorPtr from(std::vector<std::int64_t> shape, std::vector<double> values,
                        bool requires_grad = false);
  static TensorPtr scalar(double value, bool requires_grad = false);

  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
  bool is_scalar() const { return values.size() == 1; }

  double item() const;  // scalar value; throws on non-scalar

  void ensure_grad();          // allocate (zeroed) if absent
  void zero_grad();            // zero if allocated
  bool values_finite() const;  // no NaN/Inf in values
};

/// Records the forward computation as an ordered list of backward closures.
/// Construction order is topological by definition, so backward() is a single
/// reverse sweep; each closure accumulates (+=) into its inputs' grads, which
/// makes fan-out and shared embeddings come out right without bookkeeping.
class Tape {
 public:
  /// Register a node; returns `output` for chaining inside ops.
  TensorPtr record(TensorPtr output, std::function<void()> backward);

  /// Seed d(loss)/d(loss)=1 and sweep the tape once in reverse.
  /// Grad buffers of intermediates recorded on this tape are reset first;
  /// leaf gradients are left alone so batches can accumulate across tapes.
  void backward(const TensorPtr& loss);

  void clear();
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    TensorPtr output;
    std::function<void()> backward;
  };
  std::vector<Node> nodes_;
};

}  // namespace dlord::ad
