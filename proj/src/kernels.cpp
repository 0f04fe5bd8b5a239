#include "dlord/kernels.hpp"

#ifdef DLORD_WITH_OPENBLAS

#include <mutex>

#include <cblas.h>

extern "C" void openblas_set_num_threads(int);

namespace dlord::ad::kern {

namespace {
// One worker thread keeps results independent of machine load and of any
// OPENBLAS_NUM_THREADS the environment happens to carry.
std::once_flag g_blas_once;
void pin_single_thread() {
  std::call_once(g_blas_once, [] { openblas_set_num_threads(1); });
}
}  // namespace

void matmul_acc(double* c, const double* a, const double* b, int m, int k, int n) {
  pin_single_thread();
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, m, n, k, 1.0, a, k, b, n, 1.0, c, n);
}

void matmul_tn_acc(double* c, const double* a, const double* b, int m, int k, int n) {
  pin_single_thread();
  cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, m, n, k, 1.0, a, m, b, n, 1.0, c, n);
}

void matmul_nt_acc(double* c, const double* a, const double* b, int m, int k, int n) {
  pin_single_thread();
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, m, n, k, 1.0, a, k, b, k, 1.0, c, n);
}

void gemv_acc(double* y, const double* w, const double* x, int m, int n) {
  pin_single_thread();
  cblas_dgemv(CblasRowMajor, CblasNoTrans, m, n, 1.0, w, n, x, 1, 1.0, y, 1);
}

void gemv_t_acc(double* y, const double* w, const double* g, int m, int n) {
  pin_single_thread();
  cblas_dgemv(CblasRowMajor, CblasTrans, m, n, 1.0, w, n, g, 1, 1.0, y, 1);
}

void ger_acc(double* w, const double* g, const double* x, int m, int n) {
  pin_single_thread();
  cblas_dger(CblasRowMajor, m, n, 1.0, g, 1, x, 1, w, n);
}

}  // namespace dlord::ad::kern

#else  // portable fallback

namespace dlord::ad::kern {

void matmul_acc(double* c, const double* a, const double* b, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<std::size_t>(i) * n;
    const double* arow = a + static_cast<std::size_t>(i) * k;
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      const double* brow = b + static_cast<std::size_t>(kk) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_tn_acc(double* c, const double* a, const double* b, int m, int k, int n) {
  for (int kk = 0; kk < k; ++kk) {
    const double* arow = a + static_cast<std::size_t>(kk) * m;
    const double* brow = b + static_cast<std::size_t>(kk) * n;
    for (int i = 0; i < m; ++i) {
      const double av = arow[i];
      double* crow = c + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt_acc(double* c, const double* a, const double* b, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<std::size_t>(j) * k;
      double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
      int kk = 0;
      for (; kk + 4 <= k; kk += 4) {
        s0 += arow[kk] * brow[kk];
        s1 += arow[kk + 1] * brow[kk + 1];
        s2 += arow[kk + 2] * brow[kk + 2];
        s3 += arow[kk + 3] * brow[kk + 3];
      }
      for (; kk < k; ++kk) s0 += arow[kk] * brow[kk];
      crow[j] += ((s0 + s1) + (s2 + s3));
    }
  }
}

void gemv_acc(double* y, const double* w, const double* x, int m, int n) {
  for (int i = 0; i < m; ++i) {
    const double* wrow = w + static_cast<std::size_t>(i) * n;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
      s0 += wrow[j] * x[j];
      s1 += wrow[j + 1] * x[j + 1];
      s2 += wrow[j + 2] * x[j + 2];
      s3 += wrow[j + 3] * x[j + 3];
    }
    for (; j < n; ++j) s0 += wrow[j] * x[j];
    y[i] += ((s0 + s1) + (s2 + s3));
  }
}

void gemv_t_acc(double* y, const double* w, const double* g, int m, int n) {
  for (int i = 0; i < m; ++i) {
    const double gi = g[i];
    const double* wrow = w + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) y[j] += gi * wrow[j];
  }
}

void ger_acc(double* w, const double* g, const double* x, int m, int n) {
  for (int i = 0; i < m; ++i) {
    const double gi = g[i];
    double* wrow = w + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) wrow[j] += gi * x[j];
  }
}

}  // namespace dlord::ad::kern

#endif
