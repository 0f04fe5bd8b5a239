#include <doctest.h>

#include <vector>

#include "dlord/errors.hpp"
#include "dlord/gradcheck.hpp"
#include "dlord/ops.hpp"
#include "dlord/rng.hpp"

using namespace dlord;
using namespace dlord::ad;

namespace {

// Random points kept away from the leaky-relu kink and the l2norm origin so
// finite differences stay well-conditioned.
TensorPtr random_point(Rng& rng, std::vector<std::int64_t> shape) {
  std::vector<double> vals(static_cast<std::size_t>(shape_size(shape)));
  for (auto& v : vals) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    v = sign * rng.uniform(0.1, 1.0);
  }
  return Tensor::from(std::move(shape), std::move(vals));
}

}  // namespace

TEST_CASE("polynomial gradient is exact to finite-difference order") {
  auto f = [](Tape& t, const TensorPtr& x) { return sum_all(t, square(t, x)); };
  auto p = Tensor::from({3}, {1.0, -2.0, 0.5});
  CHECK(grad_check(f, p) < 1e-8);
}

TEST_CASE("every primitive passes gradient checking at seeded random points") {
  Rng rng(2024);

  SUBCASE("conv1d") {
    for (int i = 0; i < 10; ++i) {
      auto w = random_point(rng, {2, 3, 3});
      auto b = random_point(rng, {2});
      auto f = [&](Tape& t, const TensorPtr& x) {
        return mean_all(t, square(t, conv1d(t, x, w, b, 1, 1)));
      };
      CHECK(grad_check(f, random_point(rng, {3, 7})) < 1e-4);
    }
  }
  SUBCASE("conv1d weight and bias") {
    for (int i = 0; i < 10; ++i) {
      auto x = random_point(rng, {2, 9});
      auto b = random_point(rng, {3});
      auto fw = [&](Tape& t, const TensorPtr& w) {
        return mean_all(t, square(t, conv1d(t, x, w, b, 2, 1)));
      };
      CHECK(grad_check(fw, random_point(rng, {3, 2, 4})) < 1e-4);
    }
  }
  SUBCASE("linear") {
    for (int i = 0; i < 10; ++i) {
      auto w = random_point(rng, {4, 5});
      auto b = random_point(rng, {4});
      auto f = [&](Tape& t, const TensorPtr& x) {
        return mean_all(t, square(t, linear(t, x, w, b)));
      };
      CHECK(grad_check(f, random_point(rng, {5})) < 1e-4);
    }
  }
  SUBCASE("leaky_relu") {
    for (int i = 0; i < 10; ++i) {
      auto f = [](Tape& t, const TensorPtr& x) { return sum_all(t, leaky_relu(t, x)); };
      CHECK(grad_check(f, random_point(rng, {6})) < 1e-4);
    }
  }
  SUBCASE("tanh") {
    for (int i = 0; i < 10; ++i) {
      auto f = [](Tape& t, const TensorPtr& x) { return sum_all(t, tanh_act(t, x)); };
      CHECK(grad_check(f, random_point(rng, {6})) < 1e-4);
    }
  }
  SUBCASE("adain") {
    for (int i = 0; i < 10; ++i) {
      auto g = random_point(rng, {2});
      auto b = random_point(rng, {2});
      // Linear readout keeps the probed gradients O(1); a squared readout can
      // produce near-zero elements whose finite differences drown in rounding.
      auto r = random_point(rng, {2, 8});
      auto f = [&](Tape& t, const TensorPtr& x) {
        return sum_all(t, mul(t, adain(t, x, g, b), r));
      };
      CHECK(grad_check(f, random_point(rng, {2, 8})) < 1e-4);
    }
  }
  SUBCASE("adain gamma and beta") {
    for (int i = 0; i < 10; ++i) {
      auto x = random_point(rng, {2, 8});
      auto b = random_point(rng, {2});
      auto r = random_point(rng, {2, 8});
      auto fg = [&](Tape& t, const TensorPtr& g) {
        return sum_all(t, mul(t, adain(t, x, g, b), r));
      };
      CHECK(grad_check(fg, random_point(rng, {2})) < 1e-4);
    }
  }
  SUBCASE("upsample_nearest") {
    for (int i = 0; i < 10; ++i) {
      auto f = [](Tape& t, const TensorPtr& x) {
        return mean_all(t, square(t, upsample_nearest(t, x, 2)));
      };
      CHECK(grad_check(f, random_point(rng, {2, 6})) < 1e-4);
    }
  }
  SUBCASE("reductions and elementwise") {
    for (int i = 0; i < 10; ++i) {
      auto other = random_point(rng, {5});
      auto f = [&](Tape& t, const TensorPtr& x) {
        auto s = mul(t, sub(t, x, other), add(t, x, other));
        return add(t, l2norm(t, s), mean_all(t, square(t, x)));
      };
      CHECK(grad_check(f, random_point(rng, {5})) < 1e-4);
    }
  }
  SUBCASE("exp and kl") {
    for (int i = 0; i < 10; ++i) {
      auto mu = random_point(rng, {2});
      auto f = [&](Tape& t, const TensorPtr& lv) {
        return add(t, gaussian_kl(t, mu, lv), sum_all(t, exp_elem(t, lv)));
      };
      CHECK(grad_check(f, random_point(rng, {2})) < 1e-4);
    }
  }
  SUBCASE("cross entropy") {
    for (int i = 0; i < 10; ++i) {
      auto f = [](Tape& t, const TensorPtr& x) { return cross_entropy_logits(t, x, 2); };
      CHECK(grad_check(f, random_point(rng, {4})) < 1e-4);
    }
  }
  SUBCASE("skeleton consistency") {
    std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}};
    for (int i = 0; i < 10; ++i) {
      auto f = [&](Tape& t, const TensorPtr& x) { return skeleton_consistency(t, x, edges); };
      CHECK(grad_check(f, random_point(rng, {9, 5})) < 1e-4);
    }
  }
}

TEST_CASE("linear+tanh chain matches finite differences") {
  Rng rng(7);
  auto w = random_point(rng, {3, 4});
  auto b = random_point(rng, {3});
  auto f = [&](Tape& t, const TensorPtr& x) {
    return mean_all(t, square(t, tanh_act(t, linear(t, x, w, b))));
  };
  CHECK(grad_check(f, random_point(rng, {4})) < 1e-4);
}

TEST_CASE("grad_check flags non-finite evaluations") {
  auto f = [](Tape& t, const TensorPtr& x) {
    auto big = scale_shift(t, x, 1e308, 1e308);
    return sum_all(t, mul(t, big, big));
  };
  auto p = Tensor::from({2}, {1.0, 1.0});
  CHECK_THROWS_AS(grad_check(f, p), NumericError);
}

TEST_CASE("multi-leaf probe agrees with single-leaf sweep") {
  Rng rng(31);
  auto a = Tensor::from({3}, {0.4, -0.7, 0.9}, true);
  auto b = Tensor::from({3}, {0.2, 0.5, -0.3}, true);
  auto f = [&](Tape& t) { return l2norm(t, mul(t, a, b)); };
  std::vector<std::pair<std::size_t, std::size_t>> probes;
  for (std::size_t i = 0; i < 3; ++i) {
    probes.push_back({0, i});
    probes.push_back({1, i});
  }
  CHECK(grad_check_multi(f, {a, b}, probes) < 1e-4);
}
