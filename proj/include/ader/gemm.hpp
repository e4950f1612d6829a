#ifndef ADER_GEMM_HPP
#define ADER_GEMM_HPP

namespace ader {

// Small dense matrix multiplication with explicit leading dimensions, the
// primitive behind every Loop-over-GEMM tensor contraction here. Row-major
// throughout: C[M x Ncols] (+)= A[M x K] * B[K x Ncols], alpha fixed to 1,
// beta in {0,1} via `accumulate`. Leading dimensions may exceed the logical
// row length, which is what lets a GEMM run in place on a tensor matrix
// slice (the slice stride is the leading dimension).
struct GemmSpec {
  int m = 0;      // rows of C and A
  int k = 0;      // inner extent
  int ncols = 0;  // columns of C and B
  long lda = 0;   // row stride of the first array argument
  long ldb = 0;   // row stride of the second array argument
  long ldc = 0;   // row stride of the output argument
  bool accumulate = false;
};

// C (+)= A*B. Elements of C outside the logical M x Ncols block are never
// touched. C must not alias A or B; extents and strides are validated.
void gemm(const GemmSpec& spec, const double* a, const double* b, double* c);

// Transposed-output form C^T = (A*B)^T = B^T * A^T, used where a layout
// stores the result transposed (the AoSoA x-derivative). The spec describes
// the product actually performed on the arguments as passed:
// Ct[M x Ncols] (+)= Bt[M x K] * At[K x Ncols]. Accumulation order over the
// inner index matches gemm, so results are bit-identical to remapped gemm
// output.
void gemm_transposed(const GemmSpec& spec, const double* bt, const double* at, double* ct);

}  // namespace ader

#endif
