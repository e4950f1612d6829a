#include <cassert>
#include <cstdint>
#include <cstring>

#include "predictor_detail.hpp"

namespace ader {

// SplitCK on the hybrid AoSoA layout A[k3][k2][s][k1]. The AoS input is
// transposed in on entry and results transposed back out at the end. Every
// user-function call sees one full padded x-line per (k3,k2) node column,
// which is an SoA chunk of n_pad lanes at stride n_pad.
void stp_splitck_aosoa(const ElementTensor& q, const LinearPde& pde, double dt,
                       const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
                       double t_start) {
  detail::validate_stp(q, pde, dt, ops, arena, out, Variant::splitck_aosoa);

  const LayoutSpec soa = LayoutSpec::aosoa(q.spec().n, q.spec().m, q.spec().vec_width);
  const int n = soa.n, m = soa.m, np = soa.n_pad;
  const std::size_t slot = arena.slot();
  const std::size_t line_block = static_cast<std::size_t>(m) * np;
  const int n_src = pde.source_count();

  detail::SourceContext src_ctx[detail::kMaxSources];
  if (n_src > 0) detail::init_source_context(pde, ops, src_ctx);

  // row-padded transpose of the derivative operator; the zero columns beyond
  // n keep the x-padding lanes of every GEMM result exactly zero
  double dtp[detail::kMaxOrder * (detail::kMaxOrder + 8)];
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) dtp[static_cast<long>(l) * np + j] = ops.d[static_cast<long>(j) * n + l];
    for (int j = n; j < np; ++j) dtp[static_cast<long>(l) * np + j] = 0.0;
  }

  double* pp = arena.p();
  double* pt = arena.ptemp();
  double* fl = arena.flux();
  double* gr = arena.grad(0);
  double* qacc = arena.qacc();

  convert_aos_to_aosoa(q.spec(), q.data(), soa, pp);

  {
    const double* __restrict src = pp;
    double* __restrict dst = qacc;
#pragma omp simd
    for (std::size_t i = 0; i < slot; ++i) dst[i] = dt * src[i];
  }

  double amp[detail::kMaxQuantities];

  double coeff = dt;
  for (int o = 1; o < n; ++o) {
    std::memset(pt, 0, slot * sizeof(double));
    for (int src = 0; src < n_src; ++src) {
      pde.source_derivative(o - 1, t_start, src, amp);
      detail::scatter_source_aosoa(ops, src_ctx[src], amp, soa, pt);
    }

    for (int d = 0; d < 3; ++d) {
      for (int zy = 0; zy < n * n; ++zy) {
        const double* chunk = pp + zy * line_block;
        assert(reinterpret_cast<std::uintptr_t>(chunk) % soa.alignment_bytes == 0);
        pde.flux_vect(chunk, d, fl + zy * line_block, np, np);
      }
      detail::derive_aosoa(d, soa, ops.d.data(), dtp, fl, pt, true);
      detail::derive_aosoa(d, soa, ops.d.data(), dtp, pp, gr, false);
      // flux scratch is free again; reuse it for the ncp values
      for (int zy = 0; zy < n * n; ++zy)
        pde.ncp_vect(gr + zy * line_block, d, fl + zy * line_block, np, np);
      double* __restrict acc = pt;
      const double* __restrict add = fl;
#pragma omp simd
      for (std::size_t i = 0; i < slot; ++i) acc[i] += add[i];
    }

    coeff *= dt / (o + 1);
    const double c = coeff;
    double* __restrict acc = qacc;
    const double* __restrict it = pt;
#pragma omp simd
    for (std::size_t i = 0; i < slot; ++i) acc[i] += c * it[i];

    std::swap(pp, pt);
  }

  convert_aosoa_to_aos(soa, qacc, out.qavg.spec(), out.qavg.data());
  for (int d = 0; d < 3; ++d) {
    for (int zy = 0; zy < n * n; ++zy)
      pde.flux_vect(qacc + zy * line_block, d, fl + zy * line_block, np, np);
    convert_aosoa_to_aos(soa, fl, out.favg[d].spec(), out.favg[d].data());
  }

  assert(out.qavg.padding_is_zero() && out.favg[0].padding_is_zero());
}

}  // namespace ader
