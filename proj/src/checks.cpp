#include "ader/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "ader/basis.hpp"
#include "ader/gemm.hpp"
#include "ader/layout.hpp"
#include "ader/pde.hpp"
#include "ader/predictor.hpp"
#include "ader/util.hpp"

namespace ader {

namespace {

void fill_random(ElementTensor& t, SplitMix64& rng) {
  const LayoutSpec& sp = t.spec();
  for (int k3 = 0; k3 < sp.n; ++k3)
    for (int k2 = 0; k2 < sp.n; ++k2)
      for (int k1 = 0; k1 < sp.n; ++k1)
        for (int s = 0; s < sp.m; ++s) t.at(k3, k2, k1, s) = rng.next_symmetric();
}

double rel_diff(const double* a, const double* b, std::size_t len) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  return diff / std::max(scale, 1e-300);
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return rel_diff(a.data(), b.data(), a.size());
}

// canonical k-inner triple loop, the reference for the microkernel
void gemm_oracle(int m, int k, int ncols, long lda, long ldb, long ldc, bool acc, const double* a,
                 const double* b, double* c) {
  for (int r = 0; r < m; ++r)
    for (int col = 0; col < ncols; ++col) {
      double s = acc ? c[r * ldc + col] : 0.0;
      for (int kk = 0; kk < k; ++kk) s += a[r * lda + kk] * b[kk * ldb + col];
      c[r * ldc + col] = s;
    }
}

std::unique_ptr<LinearPde> make_check_pde(const std::string& name, int m) {
  if (name == "advection") return advection_pde({1.0, 0.5, 0.25}, m);
  if (name == "ncp-advection") return ncp_advection_pde({1.0, 0.5, 0.25}, m);
  if (name == "demo") return paper_demo_pde();
  return elastic_pde(2.0, 1.0, 1.0);
}

std::string ns(int n) { return "N=" + std::to_string(n); }

// --- individual suites -----------------------------------------------------

CheckResult check_operators(int n, bool inject_fault) {
  CheckResult r{"operator-exactness " + ns(n), true, ""};
  BasisOperators ops = make_basis(n);
  if (inject_fault && n > 1) {
    std::uint64_t bits;
    std::memcpy(&bits, &ops.d[1], sizeof(bits));
    bits ^= 1ull << 40;
    std::memcpy(&ops.d[1], &bits, sizeof(bits));
  }
  double worst = 0.0;
  // quadrature exact through degree 2n-1
  for (int p = 0; p <= 2 * n - 1; ++p) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += ops.weights[k] * std::pow(ops.nodes[k], p);
    worst = std::max(worst, std::abs(acc - 1.0 / (p + 1)));
  }
  if (worst > 1e-12) {
    r.pass = false;
    r.detail = "quadrature error " + format_double(worst);
    return r;
  }
  // derivative exact through degree n-1
  worst = 0.0;
  for (int p = 0; p <= n - 1; ++p)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += ops.d[k * n + l] * std::pow(ops.nodes[l], p);
      const double want = p == 0 ? 0.0 : p * std::pow(ops.nodes[k], p - 1);
      worst = std::max(worst, std::abs(acc - want));
    }
  if (worst > 1e-12) {
    r.pass = false;
    r.detail = "derivative-exactness error " + format_double(worst);
    return r;
  }
  // transpose and face partitions of unity
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (ops.d_t[l * n + k] != ops.d[k * n + l]) {
        r.pass = false;
        r.detail = "D_T is not the transpose of D";
        return r;
      }
  double sl = 0.0, sr = 0.0;
  for (int k = 0; k < n; ++k) {
    sl += ops.face_left[k];
    sr += ops.face_right[k];
  }
  if (std::abs(sl - 1.0) > 1e-13 || std::abs(sr - 1.0) > 1e-13) {
    r.pass = false;
    r.detail = "face coefficients do not sum to 1";
    return r;
  }
  r.detail = "max error " + format_double(worst);
  return r;
}

CheckResult check_layout(int n, int m, int vw, std::uint64_t seed) {
  CheckResult r{"layout-roundtrip " + ns(n), true, ""};
  SplitMix64 rng(seed ^ 0x10f00dull);
  ElementTensor src(LayoutSpec::aos(n, m, vw));
  fill_random(src, rng);
  ElementTensor back = aosoa_to_aos(aos_to_aosoa(src));
  if (std::memcmp(src.data(), back.data(), src.size() * sizeof(double)) != 0) {
    r.pass = false;
    r.detail = "AoS->AoSoA->AoS round trip is not bit-exact";
    return r;
  }
  // gather equivalence of a fused slice
  if (n >= 2) {
    SliceDescriptor sl = fused_slice(src.spec(), Dim::y, Dim::x, Dim::q, n / 2);
    for (int row = 0; row < sl.rows; ++row)
      for (int col = 0; col < sl.cols; ++col) {
        const double via_desc = src.data()[sl.offset + row * sl.slice_stride + col];
        const int k1 = col / src.spec().m_pad, s = col % src.spec().m_pad;
        const double direct = s < m ? src.at(n / 2, row, k1, s) : 0.0;
        if (via_desc != direct) {
          r.pass = false;
          r.detail = "fused slice does not address the tensor correctly";
          return r;
        }
      }
  }
  return r;
}

CheckResult check_gemm(std::uint64_t seed) {
  CheckResult r{"gemm-oracle", true, ""};
  SplitMix64 rng(seed ^ 0x6e44ull);
  for (int trial = 0; trial < 24; ++trial) {
    const int m = 1 + static_cast<int>(rng.next() % 12);
    const int k = 1 + static_cast<int>(rng.next() % 12);
    const int ncols = 1 + static_cast<int>(rng.next() % 12);
    GemmSpec g;
    g.m = m;
    g.k = k;
    g.ncols = ncols;
    g.lda = k + static_cast<int>(rng.next() % 4);
    g.ldb = ncols + static_cast<int>(rng.next() % 4);
    g.ldc = ncols + static_cast<int>(rng.next() % 4);
    g.accumulate = (rng.next() & 1) != 0;
    std::vector<double> a(m * g.lda), b(k * g.ldb), c(m * g.ldc), c2;
    for (double& v : a) v = rng.next_symmetric();
    for (double& v : b) v = rng.next_symmetric();
    for (double& v : c) v = rng.next_symmetric();
    c2 = c;
    gemm(g, a.data(), b.data(), c.data());
    gemm_oracle(g.m, g.k, g.ncols, g.lda, g.ldb, g.ldc, g.accumulate, a.data(), b.data(),
                c2.data());
    const double d = rel_diff(c, c2);
    if (d > 1e-13) {
      r.pass = false;
      r.detail = "mismatch vs triple-loop oracle: " + format_double(d);
      return r;
    }
    // padding neutrality: widening K with zero columns/rows is bit-exact
    GemmSpec gw = g;
    gw.k = k + 3;
    std::vector<double> aw(m * (g.lda + 3)), bw((k + 3) * g.ldb, 0.0), cw;
    gw.lda = g.lda + 3;
    for (int rr = 0; rr < m; ++rr)
      for (int cc = 0; cc < k; ++cc) aw[rr * gw.lda + cc] = a[rr * g.lda + cc];
    std::copy(b.begin(), b.end(), bw.begin());
    cw.assign(m * g.ldc, 0.0);
    std::vector<double> c0(m * g.ldc, 0.0);
    GemmSpec gz = g;
    gz.accumulate = false;
    gw.accumulate = false;
    gemm(gz, a.data(), b.data(), c0.data());
    gemm(gw, aw.data(), bw.data(), cw.data());
    if (std::memcmp(c0.data(), cw.data(), c0.size() * sizeof(double)) != 0) {
      r.pass = false;
      r.detail = "zero-padded K widening changed the result bits";
      return r;
    }
  }
  return r;
}

CheckResult check_pde_properties(const LinearPde& pde, std::uint64_t seed) {
  CheckResult r{"pde-properties", true, ""};
  SplitMix64 rng(seed ^ 0xbeefull);
  const int m = pde.quantities();
  std::vector<double> q1(m), q2(m), qc(m), f1(m), f2(m), fc(m);
  for (int trial = 0; trial < 16; ++trial) {
    const double a = rng.next_symmetric(), b = rng.next_symmetric();
    for (int s = 0; s < m; ++s) {
      q1[s] = rng.next_symmetric();
      q2[s] = rng.next_symmetric();
      qc[s] = a * q1[s] + b * q2[s];
    }
    for (int d = 0; d < 3; ++d) {
      pde.flux(q1.data(), d, f1.data());
      pde.flux(q2.data(), d, f2.data());
      pde.flux(qc.data(), d, fc.data());
      for (int s = 0; s < m; ++s)
        if (std::abs(fc[s] - (a * f1[s] + b * f2[s])) > 1e-13) {
          r.pass = false;
          r.detail = "flux is not linear";
          return r;
        }
      pde.ncp(q1.data(), d, f1.data());
      pde.ncp(q2.data(), d, f2.data());
      pde.ncp(qc.data(), d, fc.data());
      for (int s = 0; s < m; ++s)
        if (std::abs(fc[s] - (a * f1[s] + b * f2[s])) > 1e-13) {
          r.pass = false;
          r.detail = "ncp is not linear";
          return r;
        }
    }
  }
  // chunked forms agree lane-wise with the pointwise forms
  const int len = 6, stride = 8;
  std::vector<double> chunk(m * stride, 0.0), fchunk(m * stride, 0.0), lane(m), flane(m);
  for (int s = 0; s < m; ++s)
    for (int i = 0; i < len; ++i) chunk[s * stride + i] = rng.next_symmetric();
  for (int d = 0; d < 3; ++d) {
    pde.flux_vect(chunk.data(), d, fchunk.data(), len, stride);
    for (int i = 0; i < len; ++i) {
      for (int s = 0; s < m; ++s) lane[s] = chunk[s * stride + i];
      pde.flux(lane.data(), d, flane.data());
      for (int s = 0; s < m; ++s)
        if (std::abs(fchunk[s * stride + i] - flane[s]) > 1e-14) {
          r.pass = false;
          r.detail = "flux_vect disagrees with pointwise flux";
          return r;
        }
    }
  }
  // zero (padding) lanes stay finite
  std::fill(chunk.begin(), chunk.end(), 0.0);
  pde.flux_vect(chunk.data(), 0, fchunk.data(), stride, stride);
  pde.ncp_vect(chunk.data(), 0, fchunk.data(), stride, stride);
  for (double v : fchunk)
    if (!std::isfinite(v)) {
      r.pass = false;
      r.detail = "zero lanes produce non-finite output";
      return r;
    }
  return r;
}

CheckResult check_variants(const LinearPde& pde, int n, int vw, std::uint64_t seed) {
  CheckResult r{"variant-equivalence " + ns(n), true, ""};
  const double tol = n >= 9 ? 1e-9 : 1e-10;
  const int m = pde.quantities();
  SolverConfig cfg;
  cfg.order = n;
  cfg.quantities = m;
  cfg.vec_width = vw;
  const BasisOperators ops = make_basis(n);
  const LayoutSpec sp = LayoutSpec::aos(n, m, vw);
  const double dt = 0.4 / (3.0 * std::max(pde.max_wavespeed(), 1.0) * (2.0 * n - 1.0));

  double worst = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    SplitMix64 rng(seed * 1000 + s * 7919 + n);
    ElementTensor q(sp);
    fill_random(q, rng);
    std::vector<PredictorOutput> outs;
    for (Variant v : all_variants) {
      ScratchArena arena(v, cfg);
      outs.emplace_back(sp);
      predict(v, q, pde, dt, ops, arena, outs.back());
      extrapolate_faces(outs.back(), ops);
      if (!outs.back().qavg.padding_is_zero()) {
        r.pass = false;
        r.detail = std::string("padding lanes not zero after ") + variant_name(v);
        return r;
      }
    }
    for (std::size_t v = 1; v < outs.size(); ++v) {
      worst = std::max(worst, rel_diff(outs[0].qavg.data(), outs[v].qavg.data(), sp.size()));
      for (int d = 0; d < 3; ++d)
        worst = std::max(worst,
                         rel_diff(outs[0].favg[d].data(), outs[v].favg[d].data(), sp.size()));
      for (int f = 0; f < 6; ++f) {
        worst = std::max(worst, rel_diff(outs[0].face_q[f], outs[v].face_q[f]));
        worst = std::max(worst, rel_diff(outs[0].face_f[f], outs[v].face_f[f]));
      }
    }
  }
  r.pass = worst <= tol;
  r.detail = "max relative deviation " + format_double(worst);
  return r;
}

CheckResult check_volume_oracle(const LinearPde& pde, int n, int vw, std::uint64_t seed) {
  CheckResult r{"volume-oracle " + ns(n), true, ""};
  const int m = pde.quantities();
  const long dim = static_cast<long>(n) * n * n * m;
  if (dim > 4096) {
    r.detail = "skipped (N^3*m too large)";
    return r;
  }
  SolverConfig cfg;
  cfg.order = n;
  cfg.quantities = m;
  cfg.vec_width = vw;
  const BasisOperators ops = make_basis(n);
  const std::vector<double> vol = materialize_volume_operator(pde, ops, cfg);
  const LayoutSpec sp = LayoutSpec::aos(n, m, vw);
  SplitMix64 rng(seed ^ 0x0e11ull);
  ElementTensor q(sp);
  fill_random(q, rng);
  const double dt = 0.4 / (3.0 * std::max(pde.max_wavespeed(), 1.0) * (2.0 * n - 1.0));

  // qavg by matrix powers: sum_o dt^(o+1)/(o+1)! V^o q
  std::vector<double> iter(dim), next(dim), expect(dim, 0.0);
  for (int k = 0; k < n * n * n; ++k)
    for (int s = 0; s < m; ++s) iter[static_cast<long>(k) * m + s] = q.data()[static_cast<long>(k) * sp.m_pad + s];
  double coeff = dt;
  for (int o = 0; o < n; ++o) {
    for (long i = 0; i < dim; ++i) expect[i] += coeff * iter[i];
    for (long row = 0; row < dim; ++row) {
      double acc = 0.0;
      for (long col = 0; col < dim; ++col) acc += vol[row * dim + col] * iter[col];
      next[row] = acc;
    }
    std::swap(iter, next);
    coeff *= dt / (o + 2);
  }

  ScratchArena arena(Variant::generic, cfg);
  PredictorOutput out(sp);
  stp_generic(q, pde, dt, ops, arena, out);
  std::vector<double> got(dim);
  for (int k = 0; k < n * n * n; ++k)
    for (int s = 0; s < m; ++s) got[static_cast<long>(k) * m + s] = out.qavg.data()[static_cast<long>(k) * sp.m_pad + s];
  const double d = rel_diff(got, expect);
  r.pass = d <= 1e-11;
  r.detail = "relative deviation " + format_double(d);
  return r;
}

CheckResult check_point_source(int n, int vw, std::uint64_t seed) {
  CheckResult r{"point-source " + ns(n), true, ""};
  PointSourceSpec src;
  src.position = {0.3, 0.45, 0.7};
  src.component = 0;
  src.amplitude = 2.0;
  src.center = 0.25;
  src.width = 0.2;
  const int m = 3;
  auto pde = source_only_pde(m, src);
  const BasisOperators ops = make_basis(n);
  const LayoutSpec sp = LayoutSpec::aos(n, m, vw);
  SolverConfig cfg;
  cfg.order = n;
  cfg.quantities = m;
  cfg.vec_width = vw;
  SplitMix64 rng(seed ^ 0x50ull);
  ElementTensor q(sp);
  fill_random(q, rng);
  const double t0 = 0.15, dt = 0.05;

  // time-quadrature oracle: integrate the truncated amplitude Taylor
  // expansion with a Gauss rule in time, then scatter through P
  auto [tq_nodes, tq_weights] = gauss_legendre(n + 2);
  std::vector<double> amp_deriv(m), sint(m, 0.0);
  for (std::size_t qn = 0; qn < tq_nodes.size(); ++qn) {
    const double t = t0 + dt * tq_nodes[qn];
    // inner integral of the truncated amplitude Taylor polynomial from t0
    // to t: sum_o S^(o)(t0) (t-t0)^(o+1)/(o+1)!
    std::vector<double> inner(m, 0.0);
    double pw = t - t0;  // (t-t0)^(o+1)/(o+1)!
    for (int o = 0; o <= n - 2; ++o) {
      pde->source_derivative(o, t0, 0, amp_deriv.data());
      for (int s = 0; s < m; ++s) inner[s] += amp_deriv[s] * pw;
      pw *= (t - t0) / (o + 2);
    }
    for (int s = 0; s < m; ++s) sint[s] += dt * tq_weights[qn] * inner[s];
  }
  const std::vector<double> proj = point_source_projection(ops, src.position);
  std::vector<double> expect(sp.size(), 0.0);
  const double* qd = q.data();
  for (std::size_t i = 0; i < sp.size(); ++i) expect[i] = dt * qd[i];
  for (int k = 0; k < n * n * n; ++k)
    for (int s = 0; s < m; ++s)
      expect[static_cast<long>(k) * sp.m_pad + s] += proj[k] * sint[s];

  ScratchArena arena(Variant::generic, cfg);
  PredictorOutput out(sp);
  stp_generic(q, *pde, dt, ops, arena, out, t0);
  const double d = rel_diff(out.qavg.data(), expect.data(), sp.size());
  r.pass = d <= 1e-10;
  r.detail = "relative deviation " + format_double(d);
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& opt) {
  std::vector<CheckResult> results;
  auto pde = make_check_pde(opt.pde, opt.quantities);
  const int m = pde->quantities();

  for (int n : opt.orders) results.push_back(check_operators(n, opt.inject_d_fault));
  for (int n : opt.orders) results.push_back(check_layout(n, m, opt.vec_width, opt.seed));
  results.push_back(check_gemm(opt.seed));
  results.push_back(check_pde_properties(*pde, opt.seed));
  for (int n : opt.orders) results.push_back(check_variants(*pde, n, opt.vec_width, opt.seed));
  for (int n : opt.orders) {
    if (static_cast<long>(n) * n * n * m <= 4096)
      results.push_back(check_volume_oracle(*pde, n, opt.vec_width, opt.seed));
  }
  for (int n : {3, 5}) results.push_back(check_point_source(n, opt.vec_width, opt.seed));
  return results;
}

}  // namespace ader
