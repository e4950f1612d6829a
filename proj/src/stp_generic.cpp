#include <cassert>
#include <cstring>

#include "predictor_detail.hpp"

namespace ader {

// Scalar reference kernel. Stores the whole chain of Taylor iterates and
// the per-iteration fluxes, then forms the time averages in trailing loops;
// derivatives are plain nested loops on unpadded buffers.
void stp_generic(const ElementTensor& q, const LinearPde& pde, double dt,
                 const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
                 double t_start) {
  detail::validate_stp(q, pde, dt, ops, arena, out, Variant::generic);

  const LayoutSpec& sp = q.spec();
  const int n = sp.n, m = sp.m, mp = sp.m_pad;
  const int nn = n * n * n;
  const std::size_t slot = arena.slot();
  const int n_src = pde.source_count();

  detail::SourceContext src_ctx[detail::kMaxSources];
  if (n_src > 0) detail::init_source_context(pde, ops, src_ctx);

  // strip quantity padding into the working copy
  {
    const double* qd = q.data();
    double* p0 = arena.p_slot(0);
    for (int k = 0; k < nn; ++k)
      for (int s = 0; s < m; ++s) p0[static_cast<long>(k) * m + s] = qd[static_cast<long>(k) * mp + s];
  }

  double tmp[detail::kMaxQuantities];
  double amp[detail::kMaxQuantities];

  for (int o = 0; o < n; ++o) {
    const double* po = arena.p_slot(o);

    // fluxes of the current iterate, all three dimensions
    for (int d = 0; d < 3; ++d) {
      double* fl = arena.flux_slot(o, d);
      for (int k = 0; k < nn; ++k) pde.flux(po + static_cast<long>(k) * m, d, fl + static_cast<long>(k) * m);
    }

    // flux derivatives and state gradients
    for (int d = 0; d < 3; ++d)
      detail::derive_scalar(d, n, m, ops.d.data(), arena.flux_slot(o, d), arena.dfl(d), false);
    for (int d = 0; d < 3; ++d)
      detail::derive_scalar(d, n, m, ops.d.data(), po, arena.grad(d), false);

    // non-conservative contribution
    for (int d = 0; d < 3; ++d) {
      double* df = arena.dfl(d);
      const double* gr = arena.grad(d);
      for (int k = 0; k < nn; ++k) {
        pde.ncp(gr + static_cast<long>(k) * m, d, tmp);
        for (int s = 0; s < m; ++s) df[static_cast<long>(k) * m + s] += tmp[s];
      }
    }

    // next Taylor iterate
    double* pn = arena.p_slot(o + 1);
    const double* d0 = arena.dfl(0);
    const double* d1 = arena.dfl(1);
    const double* d2 = arena.dfl(2);
    for (std::size_t i = 0; i < slot; ++i) pn[i] = d0[i] + d1[i] + d2[i];
    for (int src = 0; src < n_src; ++src) {
      pde.source_derivative(o, t_start, src, amp);
      detail::scatter_source_aos(ops, src_ctx[src], amp, m, m, pn);
    }
  }

  // time averages: qavg from the iterates, favg from the stored fluxes
  out.qavg.fill_zero();
  for (int d = 0; d < 3; ++d) out.favg[d].fill_zero();
  double* qavg = out.qavg.data();
  double coeff = dt;
  for (int o = 0; o < n; ++o) {
    const double* po = arena.p_slot(o);
    for (int k = 0; k < nn; ++k)
      for (int s = 0; s < m; ++s)
        qavg[static_cast<long>(k) * mp + s] += coeff * po[static_cast<long>(k) * m + s];
    for (int d = 0; d < 3; ++d) {
      double* favg = out.favg[d].data();
      const double* fl = arena.flux_slot(o, d);
      for (int k = 0; k < nn; ++k)
        for (int s = 0; s < m; ++s)
          favg[static_cast<long>(k) * mp + s] += coeff * fl[static_cast<long>(k) * m + s];
    }
    coeff *= dt / (o + 2);  // dt^(o+1)/(o+1)!
  }

  assert(out.qavg.padding_is_zero());
}

}  // namespace ader
