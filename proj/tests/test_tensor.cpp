#include <doctest.h>

#include <cmath>

#include "dlord/errors.hpp"
#include "dlord/ops.hpp"
#include "dlord/rng.hpp"
#include "dlord/tensor.hpp"

using namespace dlord;
using namespace dlord::ad;

TEST_CASE("tensor shape product matches value count") {
  auto t = Tensor::zeros({2, 3, 4});
  CHECK(t->size() == 24);
  CHECK_THROWS_AS(Tensor::from({2, 2}, {1.0, 2.0, 3.0}), InvalidArgument);
}

TEST_CASE("grad buffer mirrors value shape") {
  auto t = Tensor::zeros({3, 5}, /*requires_grad=*/true);
  CHECK(t->grad.size() == t->values.size());
}

TEST_CASE("backward rejects non-scalar loss") {
  Tape tape;
  auto x = Tensor::from({2}, {1.0, 2.0}, true);
  auto y = square(tape, x);
  CHECK_THROWS_AS(tape.backward(y), InvalidArgument);
}

TEST_CASE("sum of squares gradient") {
  Tape tape;
  auto x = Tensor::from({2}, {1.0, -2.0}, true);
  auto loss = sum_all(tape, square(tape, x));
  CHECK(loss->item() == doctest::Approx(5.0));
  tape.backward(loss);
  CHECK(x->grad[0] == doctest::Approx(2.0));
  CHECK(x->grad[1] == doctest::Approx(-4.0));
}

TEST_CASE("fan-out accumulates gradients") {
  Tape tape;
  auto x = Tensor::from({3}, {1.0, 2.0, 3.0}, true);
  auto loss = sum_all(tape, add(tape, x, x));
  tape.backward(loss);
  for (double g : x->grad) CHECK(g == doctest::Approx(2.0));
}

TEST_CASE("repeated forward+backward is bit-identical") {
  auto run = [](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> vals(12);
    for (auto& v : vals) v = rng.normal();
    auto x = Tensor::from({3, 4}, vals, true);
    Tape tape;
    auto y = tanh_act(tape, x);
    auto loss = mean_all(tape, square(tape, y));
    tape.backward(loss);
    return x->grad;
  };
  auto g1 = run(77);
  auto g2 = run(77);
  REQUIRE(g1.size() == g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("forward ops keep finite inputs finite") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> vals(24);
    for (auto& v : vals) v = rng.uniform(-100.0, 100.0);
    auto x = Tensor::from({4, 6}, vals, false);
    Tape tape;
    auto g = Tensor::from({4}, {1.0, -2.0, 0.5, 3.0});
    auto b = Tensor::from({4}, {0.0, 1.0, -1.0, 0.0});
    auto y = adain(tape, x, g, b);
    auto z = leaky_relu(tape, y);
    auto u = upsample_nearest(tape, z, 2);
    auto s = sum_all(tape, square(tape, u));
    CHECK(y->values_finite());
    CHECK(z->values_finite());
    CHECK(u->values_finite());
    CHECK(std::isfinite(s->item()));
  }
}

TEST_CASE("rng restore reproduces the stream") {
  Rng a(123);
  for (int i = 0; i < 57; ++i) a.normal();
  const auto draws = a.draw_count();
  const double next = a.normal();

  Rng b(9);
  b.restore(123, draws);
  CHECK(b.normal() == next);
}
