#include "ader/gemm.hpp"

#include <stdexcept>

namespace ader {

namespace {

void validate(const GemmSpec& s, const double* a, const double* b, const double* c) {
  if (s.m < 0 || s.k < 0 || s.ncols < 0) throw std::invalid_argument("gemm: negative extent");
  if (s.lda < s.k || s.ldb < s.ncols || s.ldc < s.ncols)
    throw std::invalid_argument("gemm: leading dimension smaller than row length");
  if (s.m == 0 || s.k == 0 || s.ncols == 0) return;
  // C may not alias either input
  const double* c_end = c + static_cast<long>(s.m - 1) * s.ldc + s.ncols;
  const double* a_end = a + static_cast<long>(s.m - 1) * s.lda + s.k;
  const double* b_end = b + static_cast<long>(s.k - 1) * s.ldb + s.ncols;
  if ((c < a_end && a < c_end) || (c < b_end && b < c_end))
    throw std::invalid_argument("gemm: output aliases an input");
}

inline void kernel(const GemmSpec& s, const double* __restrict a, const double* __restrict b,
                   double* __restrict c) {
  for (int r = 0; r < s.m; ++r) {
    double* __restrict crow = c + static_cast<long>(r) * s.ldc;
    if (!s.accumulate) {
      for (int col = 0; col < s.ncols; ++col) crow[col] = 0.0;
    }
    const double* __restrict arow = a + static_cast<long>(r) * s.lda;
    for (int kk = 0; kk < s.k; ++kk) {
      const double av = arow[kk];
      const double* __restrict brow = b + static_cast<long>(kk) * s.ldb;
#pragma omp simd
      for (int col = 0; col < s.ncols; ++col) crow[col] += av * brow[col];
    }
  }
}

}  // namespace

void gemm(const GemmSpec& spec, const double* a, const double* b, double* c) {
  validate(spec, a, b, c);
  kernel(spec, a, b, c);
}

void gemm_transposed(const GemmSpec& spec, const double* bt, const double* at, double* ct) {
  validate(spec, bt, at, ct);
  // same loop structure and inner-index order as gemm, so the per-element
  // accumulation sequence is identical to the untransposed product
  kernel(spec, bt, at, ct);
}

}  // namespace ader
