#include <cassert>
#include <cstring>

#include "predictor_detail.hpp"

namespace ader {

// Dimension-split scheme: four padded tensors total. The time integral is
// accumulated on the fly inside the Taylor loop instead of storing the
// iterate chain, one flux/gradient scratch pair is reused across the three
// dimensions, and the time-averaged flux is recomputed from qavg after the
// loop, which linearity makes exact.
void stp_splitck(const ElementTensor& q, const LinearPde& pde, double dt,
                 const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
                 double t_start) {
  detail::validate_stp(q, pde, dt, ops, arena, out, Variant::splitck);

  const LayoutSpec& sp = q.spec();
  const int n = sp.n, m = sp.m, mp = sp.m_pad;
  const int nn = n * n * n;
  const std::size_t slot = arena.slot();
  const int n_src = pde.source_count();

  detail::SourceContext src_ctx[detail::kMaxSources];
  if (n_src > 0) detail::init_source_context(pde, ops, src_ctx);

  double* pp = arena.p();
  double* pt = arena.ptemp();
  double* fl = arena.flux();
  double* gr = arena.grad(0);

  std::memcpy(pp, q.data(), slot * sizeof(double));

  // order-zero Taylor term
  double* __restrict qavg = out.qavg.data();
  {
    const double* __restrict qd = q.data();
#pragma omp simd
    for (std::size_t i = 0; i < slot; ++i) qavg[i] = dt * qd[i];
  }

  double tmp[detail::kMaxQuantities];
  double amp[detail::kMaxQuantities];

  double coeff = dt;
  for (int o = 1; o < n; ++o) {
    std::memset(pt, 0, slot * sizeof(double));
    for (int src = 0; src < n_src; ++src) {
      pde.source_derivative(o - 1, t_start, src, amp);
      detail::scatter_source_aos(ops, src_ctx[src], amp, m, mp, pt);
    }

    for (int d = 0; d < 3; ++d) {
      for (int k = 0; k < nn; ++k) pde.flux(pp + static_cast<long>(k) * mp, d, fl + static_cast<long>(k) * mp);
      detail::derive_aos_gemm(d, sp, ops.d.data(), fl, pt, true);
      detail::derive_aos_gemm(d, sp, ops.d.data(), pp, gr, false);
      for (int k = 0; k < nn; ++k) {
        pde.ncp(gr + static_cast<long>(k) * mp, d, tmp);
        double* node = pt + static_cast<long>(k) * mp;
        for (int s = 0; s < m; ++s) node[s] += tmp[s];
      }
    }

    coeff *= dt / (o + 1);  // dt^(o+1)/(o+1)!
    const double c = coeff;
#pragma omp simd
    for (std::size_t i = 0; i < slot; ++i) qavg[i] += c * pt[i];

    std::swap(pp, pt);
  }

  // favg = F(qavg), one flux pass per dimension
  for (int d = 0; d < 3; ++d) {
    out.favg[d].fill_zero();
    double* favg = out.favg[d].data();
    for (int k = 0; k < nn; ++k)
      pde.flux(qavg + static_cast<long>(k) * mp, d, favg + static_cast<long>(k) * mp);
  }

  assert(out.qavg.padding_is_zero() && out.favg[0].padding_is_zero());
}

}  // namespace ader
