#include "dlord/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "dlord/errors.hpp"
#include "dlord/kernels.hpp"

namespace dlord::ad {

namespace {

constexpr double kNormEps = 1e-12;

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

void require_same_shape(const TensorPtr& a, const TensorPtr& b, const char* op) {
  if (a->shape != b->shape)
    throw InvalidArgument(std::string(op) + ": operand shapes differ");
}

}  // namespace

TensorPtr conv1d(Tape& tape, const TensorPtr& input, const TensorPtr& weight,
                 const TensorPtr& bias, int stride, int padding) {
  require(input->shape.size() == 2, "conv1d: input must be [C_in, L]");
  require(weight->shape.size() == 3, "conv1d: weight must be [C_out, C_in, K]");
  const std::int64_t c_in = input->shape[0];
  const std::int64_t len = input->shape[1];
  const std::int64_t c_out = weight->shape[0];
  const std::int64_t k = weight->shape[2];
  require(weight->shape[1] == c_in, "conv1d: weight C_in does not match input C_in");
  require(bias->shape.size() == 1 && bias->shape[0] == c_out,
          "conv1d: bias must be [C_out]");
  require(stride >= 1, "conv1d: stride must be >= 1");
  require(padding >= 0, "conv1d: padding must be >= 0");
  require(len + 2 * padding >= k, "conv1d: kernel wider than padded input");

  const std::int64_t l_out = (len + 2 * padding - k) / stride + 1;
  auto out = Tensor::zeros({c_out, l_out});

  // im2col: rows indexed by (ci, k), columns by output position.
  const std::int64_t ck = c_in * k;
  auto cols = std::make_shared<std::vector<double>>(static_cast<std::size_t>(ck * l_out), 0.0);
  for (std::int64_t ci = 0; ci < c_in; ++ci) {
    const double* in_row = input->values.data() + ci * len;
    for (std::int64_t kk = 0; kk < k; ++kk) {
      double* col_row = cols->data() + (ci * k + kk) * l_out;
      for (std::int64_t l = 0; l < l_out; ++l) {
        const std::int64_t j = l * stride + kk - padding;
        if (j >= 0 && j < len) col_row[l] = in_row[j];
      }
    }
  }
  for (std::int64_t co = 0; co < c_out; ++co) {
    double* out_row = out->values.data() + co * l_out;
    const double b = bias->values[static_cast<std::size_t>(co)];
    for (std::int64_t l = 0; l < l_out; ++l) out_row[l] = b;
  }
  kern::matmul_acc(out->values.data(), weight->values.data(), cols->data(),
                   static_cast<int>(c_out), static_cast<int>(ck), static_cast<int>(l_out));

  return tape.record(out, [input, weight, bias, out, cols, stride, padding, c_in, c_out, k,
                           len, l_out, ck]() {
    input->ensure_grad();
    weight->ensure_grad();
    bias->ensure_grad();
    const double* g = out->grad.data();

    // grad wrt bias: row sums of g
    for (std::int64_t co = 0; co < c_out; ++co) {
      const double* grow = g + co * l_out;
      double s = 0.0;
      for (std::int64_t l = 0; l < l_out; ++l) s += grow[l];
      bias->grad[static_cast<std::size_t>(co)] += s;
    }

    // grad wrt weight: g [C_out, L_out] x cols^T [L_out, CK]
    kern::matmul_nt_acc(weight->grad.data(), g, cols->data(), static_cast<int>(c_out),
                        static_cast<int>(l_out), static_cast<int>(ck));

    // grad wrt input: W^T g, scattered back through the im2col map
    std::vector<double> gcols(static_cast<std::size_t>(ck * l_out), 0.0);
    kern::matmul_tn_acc(gcols.data(), weight->values.data(), g, static_cast<int>(ck),
                        static_cast<int>(c_out), static_cast<int>(l_out));
    for (std::int64_t ci = 0; ci < c_in; ++ci) {
      double* gin_row = input->grad.data() + ci * len;
      for (std::int64_t kk = 0; kk < k; ++kk) {
        const double* gcol_row = gcols.data() + (ci * k + kk) * l_out;
        for (std::int64_t l = 0; l < l_out; ++l) {
          const std::int64_t j = l * stride + kk - padding;
          if (j >= 0 && j < len) gin_row[j] += gcol_row[l];
        }
      }
    }
  });
}

TensorPtr linear(Tape& tape, const TensorPtr& input, const TensorPtr& weight,
                 const TensorPtr& bias) {
  require(input->shape.size() == 1, "linear: input must be rank-1");
  require(weight->shape.size() == 2, "linear: weight must be [N_out, N_in]");
  const std::int64_t n_in = input->shape[0];
  const std::int64_t n_out = weight->shape[0];
  require(weight->shape[1] == n_in, "linear: weight columns do not match input length");
  require(bias->shape.size() == 1 && bias->shape[0] == n_out, "linear: bias must be [N_out]");

  auto out = Tensor::from({n_out}, bias->values);
  kern::gemv_acc(out->values.data(), weight->values.data(), input->values.data(),
                 static_cast<int>(n_out), static_cast<int>(n_in));

  return tape.record(out, [input, weight, bias, out, n_in, n_out]() {
    input->ensure_grad();
    weight->ensure_grad();
    bias->ensure_grad();
    const double* g = out->grad.data();
    for (std::int64_t i = 0; i < n_out; ++i) bias->grad[static_cast<std::size_t>(i)] += g[i];
    kern::gemv_t_acc(input->grad.data(), weight->values.data(), g, static_cast<int>(n_out),
                     static_cast<int>(n_in));
    kern::ger_acc(weight->grad.data(), g, input->values.data(), static_cast<int>(n_out),
                  static_cast<int>(n_in));
  });
}

TensorPtr leaky_relu(Tape& tape, const TensorPtr& x, double negative_slope) {
  auto out = Tensor::zeros(x->shape);
  const std::size_t n = x->values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x->values[i];
    out->values[i] = v > 0.0 ? v : negative_slope * v;
  }
  return tape.record(out, [x, out, negative_slope, n]() {
    x->ensure_grad();
    for (std::size_t i = 0; i < n; ++i)
      x->grad[i] += out->grad[i] * (x->values[i] > 0.0 ? 1.0 : negative_slope);
  });
}

TensorPtr tanh_act(Tape& tape, const TensorPtr& x) {
  auto out = Tensor::zeros(x->shape);
  const std::size_t n = x->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = std::tanh(x->values[i]);
  return tape.record(out, [x, out, n]() {
    x->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) {
      const double t = out->values[i];
      x->grad[i] += out->grad[i] * (1.0 - t * t);
    }
  });
}

TensorPtr exp_elem(Tape& tape, const TensorPtr& x) {
  auto out = Tensor::zeros(x->shape);
  const std::size_t n = x->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = std::exp(x->values[i]);
  return tape.record(out, [x, out, n]() {
    x->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) x->grad[i] += out->grad[i] * out->values[i];
  });
}

TensorPtr adain(Tape& tape, const TensorPtr& features, const TensorPtr& gamma,
                const TensorPtr& beta, double eps) {
  require(features->shape.size() == 2, "adain: features must be [C, L]");
  const std::int64_t c = features->shape[0];
  const std::int64_t l = features->shape[1];
  require(l >= 1, "adain: temporal length must be >= 1");
  require(gamma->shape.size() == 1 && gamma->shape[0] == c, "adain: gamma must be [C]");
  require(beta->shape.size() == 1 && beta->shape[0] == c, "adain: beta must be [C]");

  auto out = Tensor::zeros({c, l});
  auto mean = std::make_shared<std::vector<double>>(static_cast<std::size_t>(c), 0.0);
  auto inv_std = std::make_shared<std::vector<double>>(static_cast<std::size_t>(c), 0.0);
  for (std::int64_t ci = 0; ci < c; ++ci) {
    const double* row = features->values.data() + ci * l;
    double m = 0.0;
    for (std::int64_t t = 0; t < l; ++t) m += row[t];
    m /= static_cast<double>(l);
    double var = 0.0;
    for (std::int64_t t = 0; t < l; ++t) {
      const double d = row[t] - m;
      var += d * d;
    }
    var /= static_cast<double>(l);
    const double istd = 1.0 / std::sqrt(var + eps);
    (*mean)[static_cast<std::size_t>(ci)] = m;
    (*inv_std)[static_cast<std::size_t>(ci)] = istd;
    const double gm = gamma->values[static_cast<std::size_t>(ci)];
    const double bt = beta->values[static_cast<std::size_t>(ci)];
    double* orow = out->values.data() + ci * l;
    for (std::int64_t t = 0; t < l; ++t) orow[t] = gm * (row[t] - m) * istd + bt;
  }

  return tape.record(out, [features, gamma, beta, out, mean, inv_std, c, l]() {
    features->ensure_grad();
    gamma->ensure_grad();
    beta->ensure_grad();
    const double inv_l = 1.0 / static_cast<double>(l);
    for (std::int64_t ci = 0; ci < c; ++ci) {
      const double* row = features->values.data() + ci * l;
      const double* grow = out->grad.data() + ci * l;
      const double m = (*mean)[static_cast<std::size_t>(ci)];
      const double istd = (*inv_std)[static_cast<std::size_t>(ci)];
      const double gm = gamma->values[static_cast<std::size_t>(ci)];

      double g_sum = 0.0, g_xhat_sum = 0.0;
      for (std::int64_t t = 0; t < l; ++t) {
        const double xhat = (row[t] - m) * istd;
        g_sum += grow[t];
        g_xhat_sum += grow[t] * xhat;
      }
      beta->grad[static_cast<std::size_t>(ci)] += g_sum;
      gamma->grad[static_cast<std::size_t>(ci)] += g_xhat_sum;

      double* gin = features->grad.data() + ci * l;
      const double a = gm * istd;
      for (std::int64_t t = 0; t < l; ++t) {
        const double xhat = (row[t] - m) * istd;
        gin[t] += a * (grow[t] - inv_l * g_sum - xhat * inv_l * g_xhat_sum);
      }
    }
  });
}

TensorPtr upsample_nearest(Tape& tape, const TensorPtr& x, int scale) {
  require(x->shape.size() == 2, "upsample_nearest: input must be [C, L]");
  require(scale >= 1, "upsample_nearest: scale must be >= 1");
  const std::int64_t c = x->shape[0];
  const std::int64_t l = x->shape[1];
  auto out = Tensor::zeros({c, l * scale});
  for (std::int64_t ci = 0; ci < c; ++ci) {
    const double* row = x->values.data() + ci * l;
    double* orow = out->values.data() + ci * l * scale;
    for (std::int64_t t = 0; t < l; ++t)
      for (int r = 0; r < scale; ++r) orow[t * scale + r] = row[t];
  }
  return tape.record(out, [x, out, scale, c, l]() {
    x->ensure_grad();
    for (std::int64_t ci = 0; ci < c; ++ci) {
      double* grow = x->grad.data() + ci * l;
      const double* gout = out->grad.data() + ci * l * scale;
      for (std::int64_t t = 0; t < l; ++t) {
        double s = 0.0;
        for (int r = 0; r < scale; ++r) s += gout[t * scale + r];
        grow[t] += s;
      }
    }
  });
}

TensorPtr add(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  require_same_shape(a, b, "add");
  auto out = Tensor::zeros(a->shape);
  const std::size_t n = a->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = a->values[i] + b->values[i];
  return tape.record(out, [a, b, out, n]() {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) {
      a->grad[i] += out->grad[i];
      b->grad[i] += out->grad[i];
    }
  });
}

TensorPtr sub(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  require_same_shape(a, b, "sub");
  auto out = Tensor::zeros(a->shape);
  const std::size_t n = a->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = a->values[i] - b->values[i];
  return tape.record(out, [a, b, out, n]() {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) {
      a->grad[i] += out->grad[i];
      b->grad[i] -= out->grad[i];
    }
  });
}

TensorPtr mul(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  require_same_shape(a, b, "mul");
  auto out = Tensor::zeros(a->shape);
  const std::size_t n = a->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = a->values[i] * b->values[i];
  return tape.record(out, [a, b, out, n]() {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) {
      a->grad[i] += out->grad[i] * b->values[i];
      b->grad[i] += out->grad[i] * a->values[i];
    }
  });
}

TensorPtr square(Tape& tape, const TensorPtr& x) {
  auto out = Tensor::zeros(x->shape);
  const std::size_t n = x->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = x->values[i] * x->values[i];
  return tape.record(out, [x, out, n]() {
    x->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) x->grad[i] += 2.0 * out->grad[i] * x->values[i];
  });
}

TensorPtr concat(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  require(a->shape.size() == 1 && b->shape.size() == 1, "concat: operands must be rank-1");
  const std::int64_t na = a->shape[0];
  const std::int64_t nb = b->shape[0];
  auto out = Tensor::zeros({na + nb});
  std::copy(a->values.begin(), a->values.end(), out->values.begin());
  std::copy(b->values.begin(), b->values.end(), out->values.begin() + na);
  return tape.record(out, [a, b, out, na, nb]() {
    a->ensure_grad();
    b->ensure_grad();
    for (std::int64_t i = 0; i < na; ++i) a->grad[static_cast<std::size_t>(i)] += out->grad[static_cast<std::size_t>(i)];
    for (std::int64_t i = 0; i < nb; ++i)
      b->grad[static_cast<std::size_t>(i)] += out->grad[static_cast<std::size_t>(na + i)];
  });
}

TensorPtr slice(Tape& tape, const TensorPtr& x, std::int64_t offset, std::int64_t length) {
  require(x->shape.size() == 1, "slice: input must be rank-1");
  require(offset >= 0 && length >= 0 && offset + length <= x->shape[0],
          "slice: window out of range");
  auto out = Tensor::zeros({length});
  std::copy(x->values.begin() + offset, x->values.begin() + offset + length,
            out->values.begin());
  return tape.record(out, [x, out, offset, length]() {
    x->ensure_grad();
    for (std::int64_t i = 0; i < length; ++i)
      x->grad[static_cast<std::size_t>(offset + i)] += out->grad[static_cast<std::size_t>(i)];
  });
}

TensorPtr reshape(Tape& tape, const TensorPtr& x, std::vector<std::int64_t> shape) {
  require(shape_size(shape) == x->size(), "reshape: element count mismatch");
  auto out = Tensor::from(std::move(shape), x->values);
  return tape.record(out, [x, out]() {
    x->ensure_grad();
    const std::size_t n = x->values.size();
    for (std::size_t i = 0; i < n; ++i) x->grad[i] += out->grad[i];
  });
}

TensorPtr sum_all(Tape& tape, const TensorPtr& x) {
  double s = 0.0;
  for (double v : x->values) s += v;
  auto out = Tensor::scalar(s);
  return tape.record(out, [x, out]() {
    x->ensure_grad();
    const double g = out->grad[0];
    for (double& gv : x->grad) gv += g;
  });
}

TensorPtr mean_all(Tape& tape, const TensorPtr& x) {
  require(!x->values.empty(), "mean_all: empty tensor");
  double s = 0.0;
  for (double v : x->values) s += v;
  const double inv_n = 1.0 / static_cast<double>(x->values.size());
  auto out = Tensor::scalar(s * inv_n);
  return tape.record(out, [x, out, inv_n]() {
    x->ensure_grad();
    const double g = out->grad[0] * inv_n;
    for (double& gv : x->grad) gv += g;
  });
}

TensorPtr l2norm(Tape& tape, const TensorPtr& x) {
  double ss = kNormEps;
  for (double v : x->values) ss += v * v;
  const double r = std::sqrt(ss);
  auto out = Tensor::scalar(r);
  return tape.record(out, [x, out, r]() {
    x->ensure_grad();
    const double g = out->grad[0] / r;
    const std::size_t n = x->values.size();
    for (std::size_t i = 0; i < n; ++i) x->grad[i] += g * x->values[i];
  });
}

TensorPtr scale_shift(Tape& tape, const TensorPtr& x, double a, double b) {
  auto out = Tensor::zeros(x->shape);
  const std::size_t n = x->values.size();
  for (std::size_t i = 0; i < n; ++i) out->values[i] = a * x->values[i] + b;
  return tape.record(out, [x, out, a, n]() {
    x->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) x->grad[i] += a * out->grad[i];
  });
}

TensorPtr mse(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  require_same_shape(a, b, "mse");
  const std::size_t n = a->values.size();
  require(n > 0, "mse: empty tensors");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a->values[i] - b->values[i];
    s += d * d;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  auto out = Tensor::scalar(s * inv_n);
  return tape.record(out, [a, b, out, inv_n, n]() {
    a->ensure_grad();
    b->ensure_grad();
    const double g = 2.0 * out->grad[0] * inv_n;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a->values[i] - b->values[i];
      a->grad[i] += g * d;
      b->grad[i] -= g * d;
    }
  });
}

TensorPtr skeleton_consistency(Tape& tape, const TensorPtr& motion,
                               const std::vector<std::pair<int, int>>& edges) {
  require(motion->shape.size() == 2, "skeleton_consistency: motion must be [3J, T]");
  const std::int64_t channels = motion->shape[0];
  const std::int64_t t_len = motion->shape[1];
  require(channels % 3 == 0, "skeleton_consistency: channel count must be 3*J");
  require(t_len >= 2, "skeleton_consistency: need at least two frames");
  const std::int64_t j_count = channels / 3;
  for (const auto& [p, c] : edges)
    require(p >= 0 && c >= 0 && p < j_count && c < j_count,
            "skeleton_consistency: edge marker index out of range");

  const std::size_t b_count = edges.size();
  auto lengths = std::make_shared<std::vector<double>>(b_count * static_cast<std::size_t>(t_len), 0.0);
  auto means = std::make_shared<std::vector<double>>(b_count, 0.0);

  const double* x = motion->values.data();
  double loss = 0.0;
  for (std::size_t b = 0; b < b_count; ++b) {
    const std::int64_t p = edges[b].first;
    const std::int64_t c = edges[b].second;
    double* lrow = lengths->data() + b * static_cast<std::size_t>(t_len);
    double m = 0.0;
    for (std::int64_t t = 0; t < t_len; ++t) {
      double ss = kNormEps;
      for (int axis = 0; axis < 3; ++axis) {
        const double d = x[(p * 3 + axis) * t_len + t] - x[(c * 3 + axis) * t_len + t];
        ss += d * d;
      }
      lrow[t] = std::sqrt(ss);
      m += lrow[t];
    }
    m /= static_cast<double>(t_len);
    (*means)[b] = m;
    double var = 0.0;
    for (std::int64_t t = 0; t < t_len; ++t) {
      const double d = lrow[t] - m;
      var += d * d;
    }
    loss += var / static_cast<double>(t_len - 1);
  }
  auto out = Tensor::scalar(loss);

  return tape.record(out, [motion, out, lengths, means, edges, t_len]() {
    motion->ensure_grad();
    const double g = out->grad[0];
    const double* x = motion->values.data();
    double* gx = motion->grad.data();
    const double scale = 2.0 / static_cast<double>(t_len - 1);
    for (std::size_t b = 0; b < edges.size(); ++b) {
      const std::int64_t p = edges[b].first;
      const std::int64_t c = edges[b].second;
      const double* lrow = lengths->data() + b * static_cast<std::size_t>(t_len);
      const double m = (*means)[b];
      for (std::int64_t t = 0; t < t_len; ++t) {
        const double dl = g * scale * (lrow[t] - m) / lrow[t];
        for (int axis = 0; axis < 3; ++axis) {
          const double d = x[(p * 3 + axis) * t_len + t] - x[(c * 3 + axis) * t_len + t];
          gx[(p * 3 + axis) * t_len + t] += dl * d;
          gx[(c * 3 + axis) * t_len + t] -= dl * d;
        }
      }
    }
  });
}

TensorPtr gaussian_kl(Tape& tape, const TensorPtr& mu, const TensorPtr& logvar) {
  require_same_shape(mu, logvar, "gaussian_kl");
  const std::size_t n = mu->values.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mu->values[i];
    const double lv = logvar->values[i];
    s += m * m + std::exp(lv) - lv - 1.0;
  }
  auto out = Tensor::scalar(0.5 * s);
  return tape.record(out, [mu, logvar, out, n]() {
    mu->ensure_grad();
    logvar->ensure_grad();
    const double g = out->grad[0];
    for (std::size_t i = 0; i < n; ++i) {
      mu->grad[i] += g * mu->values[i];
      logvar->grad[i] += g * 0.5 * (std::exp(logvar->values[i]) - 1.0);
    }
  });
}

TensorPtr cross_entropy_logits(Tape& tape, const TensorPtr& logits, int label) {
  require(logits->shape.size() == 1, "cross_entropy_logits: logits must be rank-1");
  const std::int64_t k = logits->shape[0];
  require(label >= 0 && label < k, "cross_entropy_logits: label out of range");
  double mx = logits->values[0];
  for (double v : logits->values) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : logits->values) z += std::exp(v - mx);
  const double loss = std::log(z) + mx - logits->values[static_cast<std::size_t>(label)];
  auto out = Tensor::scalar(loss);
  return tape.record(out, [logits, out, label, mx, z, k]() {
    logits->ensure_grad();
    const double g = out->grad[0];
    for (std::int64_t i = 0; i < k; ++i) {
      const double p = std::exp(logits->values[static_cast<std::size_t>(i)] - mx) / z;
      logits->grad[static_cast<std::size_t>(i)] +=
          g * (p - (i == label ? 1.0 : 0.0));
    }
  });
}

}  // namespace dlord::ad
