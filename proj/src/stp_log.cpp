#include <cassert>
#include <cstring>

#include "predictor_detail.hpp"

namespace ader {

// Same algorithm as stp_generic on padded tensors: every derivative is a
// batch of small GEMMs on tensor matrix slices (x contiguous, y/z through
// the slice stride on fused (x,quantity) runs), and the elementwise loops
// run vectorized over whole padded rows. User functions stay pointwise.
void stp_log(const ElementTensor& q, const LinearPde& pde, double dt, const BasisOperators& ops,
             ScratchArena& arena, PredictorOutput& out, double t_start) {
  detail::validate_stp(q, pde, dt, ops, arena, out, Variant::log);

  const LayoutSpec& sp = q.spec();
  const int n = sp.n, m = sp.m, mp = sp.m_pad;
  const int nn = n * n * n;
  const std::size_t slot = arena.slot();
  const int n_src = pde.source_count();

  detail::SourceContext src_ctx[detail::kMaxSources];
  if (n_src > 0) detail::init_source_context(pde, ops, src_ctx);

  std::memcpy(arena.p_slot(0), q.data(), slot * sizeof(double));

  double tmp[detail::kMaxQuantities];
  double amp[detail::kMaxQuantities];

  for (int o = 0; o < n; ++o) {
    const double* po = arena.p_slot(o);

    for (int d = 0; d < 3; ++d) {
      double* fl = arena.flux_slot(o, d);
      for (int k = 0; k < nn; ++k) pde.flux(po + static_cast<long>(k) * mp, d, fl + static_cast<long>(k) * mp);
      detail::derive_aos_gemm(d, sp, ops.d.data(), fl, arena.dfl(d), false);
    }
    for (int d = 0; d < 3; ++d) detail::derive_aos_gemm(d, sp, ops.d.data(), po, arena.grad(d), false);

    for (int d = 0; d < 3; ++d) {
      double* df = arena.dfl(d);
      const double* gr = arena.grad(d);
      for (int k = 0; k < nn; ++k) {
        pde.ncp(gr + static_cast<long>(k) * mp, d, tmp);
        for (int s = 0; s < m; ++s) df[static_cast<long>(k) * mp + s] += tmp[s];
      }
    }

    double* __restrict pn = arena.p_slot(o + 1);
    const double* __restrict d0 = arena.dfl(0);
    const double* __restrict d1 = arena.dfl(1);
    const double* __restrict d2 = arena.dfl(2);
#pragma omp simd
    for (std::size_t i = 0; i < slot; ++i) pn[i] = d0[i] + d1[i] + d2[i];
    for (int src = 0; src < n_src; ++src) {
      pde.source_derivative(o, t_start, src, amp);
      detail::scatter_source_aos(ops, src_ctx[src], amp, m, mp, pn);
    }
  }

  out.qavg.fill_zero();
  for (int d = 0; d < 3; ++d) out.favg[d].fill_zero();
  double* __restrict qavg = out.qavg.data();
  double coeff = dt;
  for (int o = 0; o < n; ++o) {
    const double* __restrict po = arena.p_slot(o);
    const double c = coeff;
#pragma omp simd
    for (std::size_t i = 0; i < slot; ++i) qavg[i] += c * po[i];
    for (int d = 0; d < 3; ++d) {
      double* __restrict favg = out.favg[d].data();
      const double* __restrict fl = arena.flux_slot(o, d);
#pragma omp simd
      for (std::size_t i = 0; i < slot; ++i) favg[i] += c * fl[i];
    }
    coeff *= dt / (o + 2);
  }

  assert(out.qavg.padding_is_zero() && out.favg[0].padding_is_zero());
}

}  // namespace ader
