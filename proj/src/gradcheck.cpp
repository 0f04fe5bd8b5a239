#include "dlord/gradcheck.hpp"

#include <cmath>

#include "dlord/errors.hpp"

namespace dlord::ad {

namespace {

double checked_eval(const TensorPtr& loss) {
  if (!loss->is_scalar()) throw InvalidArgument("grad_check: function must be scalar-valued");
  const double v = loss->item();
  if (!std::isfinite(v)) throw NumericError("grad_check: function evaluated to a non-finite value");
  return v;
}

double rel_error(double analytic, double numeric) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
  return std::fabs(analytic - numeric) / denom;
}

}  // namespace

double grad_check(const ScalarFn& f, const TensorPtr& point, double h) {
  auto x = Tensor::from(point->shape, point->values, /*requires_grad=*/true);
  Tape tape;
  auto loss = f(tape, x);
  checked_eval(loss);
  tape.backward(loss);
  std::vector<double> analytic = x->grad;

  double max_err = 0.0;
  for (std::size_t i = 0; i < x->values.size(); ++i) {
    const double saved = x->values[i];
    x->values[i] = saved + h;
    Tape tp;
    const double fp = checked_eval(f(tp, x));
    x->values[i] = saved - h;
    Tape tm;
    const double fm = checked_eval(f(tm, x));
    x->values[i] = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    max_err = std::max(max_err, rel_error(analytic[i], numeric));
  }
  return max_err;
}

double grad_check_multi(const MultiScalarFn& f, const std::vector<TensorPtr>& leaves,
                        const std::vector<std::pair<std::size_t, std::size_t>>& probes,
                        double h) {
  Tape tape;
  auto loss = f(tape);
  checked_eval(loss);
  for (auto& leaf : leaves) {
    leaf->ensure_grad();
    leaf->zero_grad();
  }
  tape.backward(loss);

  std::vector<std::vector<double>> analytic;
  analytic.reserve(leaves.size());
  for (auto& leaf : leaves) analytic.push_back(leaf->grad);

  double max_err = 0.0;
  for (auto [li, ei] : probes) {
    if (li >= leaves.size() || ei >= leaves[li]->values.size())
      throw InvalidArgument("grad_check_multi: probe index out of range");
    auto& leaf = leaves[li];
    const double saved = leaf->values[ei];
    leaf->values[ei] = saved + h;
    Tape tp;
    const double fp = checked_eval(f(tp));
    leaf->values[ei] = saved - h;
    Tape tm;
    const double fm = checked_eval(f(tm));
    leaf->values[ei] = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    max_err = std::max(max_err, rel_error(analytic[li][ei], numeric));
  }
  return max_err;
}

}  // namespace dlord::ad
