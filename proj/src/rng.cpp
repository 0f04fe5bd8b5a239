#include "dlord/rng.hpp"

#include <cmath>

namespace dlord {

double Rng::normal() {
  // Two fresh draws per call; no cached spare, so draw_count stays exact.
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // uniform() can return exactly 0
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586476925286766559 * u2;
  return r * std::cos(theta);
}

void Rng::restore(std::uint64_t seed, std::uint64_t draw_count) {
  engine_.seed(seed);
  seed_ = seed;
  draws_ = draw_count;
  engine_.discard(draw_count);
}

}  // namespace dlord
