#include <doctest.h>

#include <cmath>
#include <vector>

#include "dlord/adam.hpp"
#include "dlord/errors.hpp"

using namespace dlord;
using namespace dlord::ad;

TEST_CASE("zero gradient leaves fresh parameters unchanged") {
  std::vector<double> params{1.0, -2.0, 3.0};
  std::vector<double> grads{0.0, 0.0, 0.0};
  AdamState s;
  s.init(3);
  adam_step(params, grads, s);
  CHECK(s.t == 1);
  CHECK(params == std::vector<double>{1.0, -2.0, 3.0});
}

TEST_CASE("first step matches the closed-form bias-corrected update") {
  const double g = 0.25;
  std::vector<double> params{1.0};
  std::vector<double> grads{g};
  AdamState s;
  s.lr = 1e-3;
  s.init(1);
  adam_step(params, grads, s);
  // After one step m_hat = g, v_hat = g^2, so the update is lr * g / (|g| + eps).
  const double expect = 1.0 - s.lr * g / (std::fabs(g) + s.eps);
  CHECK(params[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("identical states give bit-identical results") {
  auto run = []() {
    std::vector<double> params{0.5, -0.5};
    AdamState s;
    s.init(2);
    for (int i = 0; i < 10; ++i) {
      std::vector<double> grads{0.1 * (i + 1), -0.05 * (i + 1)};
      adam_step(params, grads, s);
    }
    return params;
  };
  auto p1 = run();
  auto p2 = run();
  CHECK(p1[0] == p2[0]);
  CHECK(p1[1] == p2[1]);
}

TEST_CASE("shape mismatch is rejected") {
  std::vector<double> params{1.0, 2.0};
  std::vector<double> grads{1.0};
  AdamState s;
  s.init(2);
  CHECK_THROWS_AS(adam_step(params, grads, s), InvalidArgument);
  AdamState bad;
  bad.init(1);
  std::vector<double> g2{1.0, 1.0};
  CHECK_THROWS_AS(adam_step(params, g2, bad), InvalidArgument);
}

TEST_CASE("optimizer steps registered tensors in order") {
  auto p = Tensor::from({2}, {1.0, 1.0}, true);
  ParamOptimizer opt(1e-2, 0.5, 0.999);
  opt.add(p);
  p->grad[0] = 1.0;
  p->grad[1] = -1.0;
  opt.step();
  CHECK(p->values[0] < 1.0);
  CHECK(p->values[1] > 1.0);
  opt.zero_grad();
  CHECK(p->grad[0] == 0.0);
}
