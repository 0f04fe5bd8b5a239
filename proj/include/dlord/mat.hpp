#pragma once

#include <cstdint>
#include <vector>

namespace dlord {

/// Minimal dense row-major matrix used for reports and plain numeric results.
struct Mat {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::int64_t r, std::int64_t c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), 0.0) {}

  double& at(std::int64_t r, std::int64_t c) { return data[static_cast<std::size_t>(r * cols + c)]; }
  double at(std::int64_t r, std::int64_t c) const {
    return data[static_cast<std::size_t>(r * cols + c)];
  }
  const double* row(std::int64_t r) const { return data.data() + r * cols; }
  double* row(std::int64_t r) { return data.data() + r * cols; }
};

}  // namespace dlord
