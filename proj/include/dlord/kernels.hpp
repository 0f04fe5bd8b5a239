#pragma once

#include <cstdint>

namespace dlord::ad::kern {

// Dense accumulate kernels behind the autodiff ops. All row-major, all
// "+=" semantics so callers can preload bias terms. Backed by single-threaded
// OpenBLAS when available, otherwise by plain loops with a fixed summation
// order; either way results are deterministic run-to-run for one binary.

/// C[M,N] += A[M,K] * B[K,N]
void matmul_acc(double* c, const double* a, const double* b, int m, int k, int n);

/// C[M,N] += A[K,M]^T * B[K,N]
void matmul_tn_acc(double* c, const double* a, const double* b, int m, int k, int n);

/// C[M,N] += A[M,K] * B[N,K]^T
void matmul_nt_acc(double* c, const double* a, const double* b, int m, int k, int n);

/// y[M] += W[M,N] * x[N]
void gemv_acc(double* y, const double* w, const double* x, int m, int n);

/// y[N] += W[M,N]^T * g[M]
void gemv_t_acc(double* y, const double* w, const double* g, int m, int n);

/// W[M,N] += g[M] * x[N]^T  (rank-1 update)
void ger_acc(double* w, const double* g, const double* x, int m, int n);

}  // namespace dlord::ad::kern
