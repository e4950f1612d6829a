#ifndef ADER_PREDICTOR_DETAIL_HPP
#define ADER_PREDICTOR_DETAIL_HPP

#include <cmath>
#include <stdexcept>

#include "ader/basis.hpp"
#include "ader/gemm.hpp"
#include "ader/layout.hpp"
#include "ader/pde.hpp"
#include "ader/predictor.hpp"

namespace ader::detail {

inline constexpr int kMaxOrder = 31;
inline constexpr int kMaxQuantities = 64;
inline constexpr int kMaxSources = 8;

void validate_stp(const ElementTensor& q, const LinearPde& pde, double dt,
                  const BasisOperators& ops, const ScratchArena& arena, const PredictorOutput& out,
                  Variant variant);

// Nodal derivative along `dim` on an unpadded s-fastest buffer: naive
// nested loops, the scalar reference everything else is checked against.
void derive_scalar(int dim, int n, int m, const double* d_op, const double* src, double* dst,
                   bool accumulate);

// Same contraction as batched GEMMs on slices of a padded AoS buffer.
void derive_aos_gemm(int dim, const LayoutSpec& spec, const double* d_op, const double* src,
                     double* dst, bool accumulate);

// AoSoA: x via the transposed product against a row-padded D^T, y/z on
// fused (quantity, x) slices.
void derive_aosoa(int dim, const LayoutSpec& spec, const double* d_op, const double* d_t_padded,
                  const double* src, double* dst, bool accumulate);

// One application of the volume operator on unpadded s-fastest buffers:
// out = sum_d [ D_d F_d(u) + B_d D_d u ]. flux_work/grad_work are n^3*m
// scratch owned by the caller.
void apply_volume_once(const LinearPde& pde, const BasisOperators& ops, const double* u,
                       double* out, double* flux_work, double* grad_work);

// Per-source 1D basis values at the source position, for the weak Dirac
// scatter P[k] = phi(x)phi(y)phi(z) / (w w w).
struct SourceContext {
  double phi[3][kMaxOrder];
};

void init_source_context(const LinearPde& pde, const BasisOperators& ops, SourceContext* ctx);

// Adds amp[s] * P[k] over the logical lanes of a padded AoS buffer.
void scatter_source_aos(const BasisOperators& ops, const SourceContext& ctx, const double* amp,
                        int m, int m_stride, double* buf);

// Same scatter into an AoSoA buffer.
void scatter_source_aosoa(const BasisOperators& ops, const SourceContext& ctx, const double* amp,
                          const LayoutSpec& spec, double* buf);

}  // namespace ader::detail

#endif
