#ifndef ADER_PREDICTOR_HPP
#define ADER_PREDICTOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ader/basis.hpp"
#include "ader/config.hpp"
#include "ader/layout.hpp"
#include "ader/pde.hpp"

namespace ader {

// What the corrector consumes: time-integrated degrees of freedom over one
// step, the time-integrated flux per spatial dimension, and their traces on
// the six element faces. Outputs are always AoS regardless of the kernel's
// internal layout; face arrays are n^2 * m, quantity fastest, with the
// in-face node index running over the remaining dimensions in (z,y,x) order.
// Faces are ordered -x, +x, -y, +y, -z, +z.
struct PredictorOutput {
  ElementTensor qavg;
  std::array<ElementTensor, 3> favg;
  std::array<std::vector<double>, 6> face_q;
  std::array<std::vector<double>, 6> face_f;

  explicit PredictorOutput(const LayoutSpec& aos_spec);
};

// Pre-sized temporaries for one kernel variant. Kernels never allocate; an
// arena is built once and reused across elements by a single worker. Its
// byte size is exactly scratch_bytes(variant, config):
//
//   generic  (N+1 + 3N + 3 + 3) tensors of N^3*m      = (4N+7)*N^3*m
//   log      same shape, quantity dimension padded    = (4N+7)*N^3*m_pad
//   splitck  p, ptemp, flux, gradQ                    = 4*N^3*m_pad
//   aosoa    p, ptemp, flux, gradQ, qavg accumulator  = 5*N^2*m*n_pad
//
// (all in doubles; bytes are 8x).
class ScratchArena {
public:
  ScratchArena(Variant variant, const SolverConfig& cfg);

  Variant variant() const { return variant_; }
  int order() const { return n_; }
  int quantities() const { return m_; }
  int vec_width() const { return vec_width_; }
  std::size_t bytes() const { return buf_.size() * sizeof(double); }
  std::size_t slot() const { return slot_; }

  // generic/log: Taylor iterates 0..N and per-(iteration,dim) flux stores
  double* p_slot(int o) { return buf_.data() + p_off_ + o * slot_; }
  double* flux_slot(int o, int d) { return buf_.data() + flux_off_ + (o * 3 + d) * slot_; }
  double* grad(int d) { return buf_.data() + grad_off_ + d * slot_; }
  double* dfl(int d) { return buf_.data() + dfl_off_ + d * slot_; }

  // splitck/aosoa: single-slot views
  double* p() { return buf_.data() + p_off_; }
  double* ptemp() { return buf_.data() + ptemp_off_; }
  double* flux() { return buf_.data() + flux_off_; }
  double* qacc() { return buf_.data() + qacc_off_; }

private:
  Variant variant_;
  int n_, m_, vec_width_;
  std::size_t slot_ = 0;
  std::size_t p_off_ = 0, flux_off_ = 0, grad_off_ = 0, dfl_off_ = 0, ptemp_off_ = 0,
              qacc_off_ = 0;
  AlignedBuffer buf_;
};

// Exact arena size in bytes for a variant (formulas above).
std::size_t scratch_bytes(Variant variant, const SolverConfig& cfg);

// Closed-form multiply/add count of one predictor call, padded lanes
// included. Covers the tensor contractions and accumulations the kernel
// itself performs; arithmetic inside the PDE user functions is not counted
// (it is system-specific). With D = 12N+5 per-iteration derive+accumulate
// work per tensor entry:
//
//   generic  N^4 * m     * (12N+13)
//   log      N^4 * m_pad * (12N+13)
//   splitck  N^3 * m_pad * ((N-1)(12N+5) + 1)
//   aosoa    N^2 * m * n_pad * ((N-1)(12N+5) + 1)
std::uint64_t flop_count(Variant variant, const SolverConfig& cfg);

// The four space-time predictor kernels. All share one contract: from the
// degrees of freedom q at t_start, fill out.qavg with the Taylor-series time
// integral of q over [t_start, t_start+dt] and out.favg[d] with the matching
// time integral of F_d(q); face arrays are left untouched (see
// extrapolate_faces). Inputs and outputs are AoS; padding lanes of every
// output are exactly zero on return.
void stp_generic(const ElementTensor& q, const LinearPde& pde, double dt,
                 const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
                 double t_start = 0.0);

// Same algorithm as stp_generic with padded tensors and every derivative
// expressed as Loop-over-GEMM on tensor matrix slices.
void stp_log(const ElementTensor& q, const LinearPde& pde, double dt, const BasisOperators& ops,
             ScratchArena& arena, PredictorOutput& out, double t_start = 0.0);

// Dimension-split formulation: one flux/gradient scratch reused across the
// three dimensions, time integration accumulated on the fly, and the
// time-averaged flux recomputed from qavg afterwards (valid by linearity).
void stp_splitck(const ElementTensor& q, const LinearPde& pde, double dt,
                 const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
                 double t_start = 0.0);

// SplitCK on the hybrid AoSoA layout: inputs are transposed to AoSoA on
// entry and outputs back to AoS on exit; x-derivatives run as transposed
// GEMMs against D^T, y/z-derivatives on fused (quantity,x) slices, and user
// functions are invoked in chunked form on full padded x-lines.
void stp_splitck_aosoa(const ElementTensor& q, const LinearPde& pde, double dt,
                       const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
                       double t_start = 0.0);

void predict(Variant variant, const ElementTensor& q, const LinearPde& pde, double dt,
             const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
             double t_start = 0.0);

// Contract qavg (and the normal-direction favg) with the face-value
// coefficients along each face's normal dimension, filling all 12 face
// arrays of `out`.
void extrapolate_faces(PredictorOutput& out, const BasisOperators& ops);

// Dense (N^3*m) x (N^3*m) volume operator V with V*q = the one-step
// flux-derivative + ncp application the kernels iterate. Row index
// ((k3*n+k2)*n+k1)*m + s, row-major, no padding. Brute-force oracle for the
// Taylor algebra; guarded to N^3*m <= 4096.
std::vector<double> materialize_volume_operator(const LinearPde& pde, const BasisOperators& ops,
                                                const SolverConfig& cfg);

}  // namespace ader

#endif
