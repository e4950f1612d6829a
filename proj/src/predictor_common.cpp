#include <cstring>

#include "ader/predictor.hpp"
#include "predictor_detail.hpp"

namespace ader {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::generic: return "generic";
    case Variant::log: return "log";
    case Variant::splitck: return "splitck";
    case Variant::splitck_aosoa: return "aosoa";
  }
  return "?";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  if (name == "generic") return Variant::generic;
  if (name == "log") return Variant::log;
  if (name == "splitck") return Variant::splitck;
  if (name == "aosoa" || name == "splitck-aosoa") return Variant::splitck_aosoa;
  return std::nullopt;
}

PredictorOutput::PredictorOutput(const LayoutSpec& aos_spec)
    : qavg(aos_spec), favg{ElementTensor(aos_spec), ElementTensor(aos_spec),
                           ElementTensor(aos_spec)} {
  const std::size_t face_len = static_cast<std::size_t>(aos_spec.n) * aos_spec.n * aos_spec.m;
  for (int f = 0; f < 6; ++f) {
    face_q[f].assign(face_len, 0.0);
    face_f[f].assign(face_len, 0.0);
  }
}

namespace {

std::size_t slot_doubles(Variant v, const SolverConfig& cfg) {
  const std::size_t nn = static_cast<std::size_t>(cfg.order) * cfg.order * cfg.order;
  switch (v) {
    case Variant::generic:
      return nn * cfg.quantities;
    case Variant::log:
    case Variant::splitck:
      return nn * pad_extent(cfg.quantities, cfg.vec_width);
    case Variant::splitck_aosoa:
      return static_cast<std::size_t>(cfg.order) * cfg.order * cfg.quantities *
             pad_extent(cfg.order, cfg.vec_width);
  }
  return 0;
}

std::size_t slot_count(Variant v, int n) {
  switch (v) {
    case Variant::generic:
    case Variant::log:
      // p over all Taylor iterates, flux per (iteration, dim), gradQ and the
      // fluctuation buffer per dim
      return static_cast<std::size_t>(n + 1) + 3 * static_cast<std::size_t>(n) + 3 + 3;
    case Variant::splitck:
      return 4;  // p, ptemp, flux, gradQ
    case Variant::splitck_aosoa:
      return 5;  // p, ptemp, flux, gradQ, qavg accumulator
  }
  return 0;
}

}  // namespace

std::size_t scratch_bytes(Variant v, const SolverConfig& cfg) {
  return slot_doubles(v, cfg) * slot_count(v, cfg.order) * sizeof(double);
}

std::uint64_t flop_count(Variant v, const SolverConfig& cfg) {
  const std::uint64_t n = cfg.order;
  const std::uint64_t m = cfg.quantities;
  const std::uint64_t mp = pad_extent(cfg.quantities, cfg.vec_width);
  const std::uint64_t np = pad_extent(cfg.order, cfg.vec_width);
  const std::uint64_t n3 = n * n * n;
  switch (v) {
    case Variant::generic:
      return n3 * n * m * (12 * n + 13);
    case Variant::log:
      return n3 * n * mp * (12 * n + 13);
    case Variant::splitck:
      return n3 * mp * ((n - 1) * (12 * n + 5) + 1);
    case Variant::splitck_aosoa:
      return n * n * m * np * ((n - 1) * (12 * n + 5) + 1);
  }
  return 0;
}

ScratchArena::ScratchArena(Variant variant, const SolverConfig& cfg)
    : variant_(variant), n_(cfg.order), m_(cfg.quantities), vec_width_(cfg.vec_width) {
  if (n_ < 1 || n_ > detail::kMaxOrder)
    throw std::invalid_argument("ScratchArena: order out of range");
  if (m_ < 1 || m_ > detail::kMaxQuantities)
    throw std::invalid_argument("ScratchArena: quantity count out of range");
  slot_ = slot_doubles(variant, cfg);
  const std::size_t slots = slot_count(variant, n_);
  const int align = cfg.vec_width * static_cast<int>(sizeof(double));
  buf_ = AlignedBuffer(slot_ * slots, align);
  switch (variant) {
    case Variant::generic:
    case Variant::log:
      p_off_ = 0;
      flux_off_ = static_cast<std::size_t>(n_ + 1) * slot_;
      grad_off_ = flux_off_ + 3 * static_cast<std::size_t>(n_) * slot_;
      dfl_off_ = grad_off_ + 3 * slot_;
      break;
    case Variant::splitck:
      p_off_ = 0;
      ptemp_off_ = slot_;
      flux_off_ = 2 * slot_;
      grad_off_ = 3 * slot_;
      break;
    case Variant::splitck_aosoa:
      p_off_ = 0;
      ptemp_off_ = slot_;
      flux_off_ = 2 * slot_;
      grad_off_ = 3 * slot_;
      qacc_off_ = 4 * slot_;
      break;
  }
}

namespace detail {

void validate_stp(const ElementTensor& q, const LinearPde& pde, double dt,
                  const BasisOperators& ops, const ScratchArena& arena, const PredictorOutput& out,
                  Variant variant) {
  const LayoutSpec& sp = q.spec();
  if (sp.kind != LayoutKind::aos) throw std::invalid_argument("stp: input tensor must be AoS");
  if (!(dt > 0.0)) throw std::invalid_argument("stp: dt must be positive");
  if (pde.quantities() != sp.m) throw std::invalid_argument("stp: pde/tensor quantity mismatch");
  if (ops.n != sp.n) throw std::invalid_argument("stp: basis/tensor order mismatch");
  if (arena.variant() != variant || arena.order() != sp.n || arena.quantities() != sp.m ||
      arena.vec_width() != sp.vec_width)
    throw std::invalid_argument("stp: arena does not match this kernel and configuration");
  if (!out.qavg.spec().compatible(sp) || out.qavg.spec().kind != LayoutKind::aos)
    throw std::invalid_argument("stp: output layout mismatch");
  if (pde.source_count() > kMaxSources) throw std::invalid_argument("stp: too many point sources");
  const double* qd = q.data();
  for (std::size_t i = 0; i < sp.size(); ++i)
    if (!std::isfinite(qd[i])) throw std::invalid_argument("stp: non-finite input DOFs");
}

void derive_scalar(int dim, int n, int m, const double* d_op, const double* src, double* dst,
                   bool accumulate) {
  // node (z,y,x) lives at ((z*n+y)*n+x)*m
  const long sx = m, sy = static_cast<long>(n) * m, sz = static_cast<long>(n) * n * m;
  const long line = dim == 0 ? sx : dim == 1 ? sy : sz;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const int k = dim == 0 ? x : dim == 1 ? y : z;
        const long base = z * sz + y * sy + x * sx;
        const long line_base = base - k * line;
        for (int s = 0; s < m; ++s) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) acc += d_op[k * n + l] * src[line_base + l * line + s];
          if (accumulate)
            dst[base + s] += acc;
          else
            dst[base + s] = acc;
        }
      }
}

void derive_aos_gemm(int dim, const LayoutSpec& spec, const double* d_op, const double* src,
                     double* dst, bool accumulate) {
  const int n = spec.n;
  GemmSpec g;
  g.m = n;
  g.k = n;
  g.lda = n;
  g.accumulate = accumulate;
  if (dim == 0) {
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y) {
        SliceDescriptor sl = slice(spec, Dim::x, Dim::q, z, y);
        g.ncols = sl.cols;
        g.ldb = g.ldc = static_cast<long>(sl.slice_stride);
        gemm(g, d_op, src + sl.offset, dst + sl.offset);
      }
  } else if (dim == 1) {
    for (int z = 0; z < n; ++z) {
      SliceDescriptor sl = fused_slice(spec, Dim::y, Dim::x, Dim::q, z);
      g.ncols = sl.cols;
      g.ldb = g.ldc = static_cast<long>(sl.slice_stride);
      gemm(g, d_op, src + sl.offset, dst + sl.offset);
    }
  } else {
    for (int y = 0; y < n; ++y) {
      SliceDescriptor sl = fused_slice(spec, Dim::z, Dim::x, Dim::q, y);
      g.ncols = sl.cols;
      g.ldb = g.ldc = static_cast<long>(sl.slice_stride);
      gemm(g, d_op, src + sl.offset, dst + sl.offset);
    }
  }
}

void derive_aosoa(int dim, const LayoutSpec& spec, const double* d_op, const double* d_t_padded,
                  const double* src, double* dst, bool accumulate) {
  const int n = spec.n;
  const int np = spec.n_pad;
  GemmSpec g;
  g.k = n;
  g.accumulate = accumulate;
  if (dim == 0) {
    // slices are transposed relative to AoS, so run C^T = B^T * A^T with the
    // row-padded transposed operator; the zero rows make the padding lanes
    // of the result exactly zero
    g.m = spec.m;
    g.ncols = np;
    g.lda = np;
    g.ldb = np;
    g.ldc = np;
    const std::size_t block = static_cast<std::size_t>(spec.m) * np;
    for (int zy = 0; zy < n * n; ++zy)
      gemm_transposed(g, src + zy * block, d_t_padded, dst + zy * block);
  } else if (dim == 1) {
    g.m = n;
    g.lda = n;
    for (int z = 0; z < n; ++z) {
      SliceDescriptor sl = fused_slice(spec, Dim::y, Dim::q, Dim::x, z);
      g.ncols = sl.cols;
      g.ldb = g.ldc = static_cast<long>(sl.slice_stride);
      gemm(g, d_op, src + sl.offset, dst + sl.offset);
    }
  } else {
    g.m = n;
    g.lda = n;
    for (int y = 0; y < n; ++y) {
      SliceDescriptor sl = fused_slice(spec, Dim::z, Dim::q, Dim::x, y);
      g.ncols = sl.cols;
      g.ldb = g.ldc = static_cast<long>(sl.slice_stride);
      gemm(g, d_op, src + sl.offset, dst + sl.offset);
    }
  }
}

void apply_volume_once(const LinearPde& pde, const BasisOperators& ops, const double* u,
                       double* out, double* flux_work, double* grad_work) {
  const int n = ops.n;
  const int m = pde.quantities();
  const int nn = n * n * n;
  double tmp[kMaxQuantities];
  std::memset(out, 0, static_cast<std::size_t>(nn) * m * sizeof(double));
  for (int d = 0; d < 3; ++d) {
    for (int k = 0; k < nn; ++k) pde.flux(u + static_cast<long>(k) * m, d, flux_work + static_cast<long>(k) * m);
    derive_scalar(d, n, m, ops.d.data(), flux_work, out, true);
    derive_scalar(d, n, m, ops.d.data(), u, grad_work, false);
    for (int k = 0; k < nn; ++k) {
      pde.ncp(grad_work + static_cast<long>(k) * m, d, tmp);
      for (int s = 0; s < m; ++s) out[static_cast<long>(k) * m + s] += tmp[s];
    }
  }
}

void init_source_context(const LinearPde& pde, const BasisOperators& ops, SourceContext* ctx) {
  for (int src = 0; src < pde.source_count(); ++src) {
    const std::array<double, 3> pos = pde.source_position(src);
    for (int d = 0; d < 3; ++d) {
      std::vector<double> phi = lagrange_values_at(ops.nodes, pos[d]);
      for (int j = 0; j < ops.n; ++j) ctx[src].phi[d][j] = phi[j];
    }
  }
}

void scatter_source_aos(const BasisOperators& ops, const SourceContext& ctx, const double* amp,
                        int m, int m_stride, double* buf) {
  const int n = ops.n;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y) {
      const double pzy = ctx.phi[2][z] * ctx.phi[1][y] * ops.inv_weights[z] * ops.inv_weights[y];
      for (int x = 0; x < n; ++x) {
        const double p = pzy * ctx.phi[0][x] * ops.inv_weights[x];
        double* node = buf + (static_cast<std::size_t>(z) * n * n + static_cast<std::size_t>(y) * n + x) * m_stride;
        for (int s = 0; s < m; ++s) node[s] += p * amp[s];
      }
    }
}

void scatter_source_aosoa(const BasisOperators& ops, const SourceContext& ctx, const double* amp,
                          const LayoutSpec& spec, double* buf) {
  const int n = ops.n;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y) {
      const double pzy = ctx.phi[2][z] * ctx.phi[1][y] * ops.inv_weights[z] * ops.inv_weights[y];
      for (int x = 0; x < n; ++x) {
        const double p = pzy * ctx.phi[0][x] * ops.inv_weights[x];
        for (int s = 0; s < spec.m; ++s) buf[spec.index(z, y, x, s)] += p * amp[s];
      }
    }
}

}  // namespace detail

void predict(Variant variant, const ElementTensor& q, const LinearPde& pde, double dt,
             const BasisOperators& ops, ScratchArena& arena, PredictorOutput& out,
             double t_start) {
  switch (variant) {
    case Variant::generic: stp_generic(q, pde, dt, ops, arena, out, t_start); return;
    case Variant::log: stp_log(q, pde, dt, ops, arena, out, t_start); return;
    case Variant::splitck: stp_splitck(q, pde, dt, ops, arena, out, t_start); return;
    case Variant::splitck_aosoa: stp_splitck_aosoa(q, pde, dt, ops, arena, out, t_start); return;
  }
}

void extrapolate_faces(PredictorOutput& out, const BasisOperators& ops) {
  const LayoutSpec& sp = out.qavg.spec();
  const int n = sp.n, m = sp.m;
  for (int d = 0; d < 3; ++d) {
    for (int side = 0; side < 2; ++side) {
      const double* coeff = side == 0 ? ops.face_left.data() : ops.face_right.data();
      std::vector<double>& fq = out.face_q[2 * d + side];
      std::vector<double>& ff = out.face_f[2 * d + side];
      std::fill(fq.begin(), fq.end(), 0.0);
      std::fill(ff.begin(), ff.end(), 0.0);
      const double* qd = out.qavg.data();
      const double* fd = out.favg[d].data();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double* fq_node = fq.data() + (static_cast<std::size_t>(a) * n + b) * m;
          double* ff_node = ff.data() + (static_cast<std::size_t>(a) * n + b) * m;
          for (int j = 0; j < n; ++j) {
            // (a,b) are the non-normal dims in (z,y,x) order
            const std::size_t idx = d == 0   ? sp.index(a, b, j, 0)
                                    : d == 1 ? sp.index(a, j, b, 0)
                                             : sp.index(j, a, b, 0);
            const double c = coeff[j];
            for (int s = 0; s < m; ++s) {
              fq_node[s] += c * qd[idx + s];
              ff_node[s] += c * fd[idx + s];
            }
          }
        }
    }
  }
}

std::vector<double> materialize_volume_operator(const LinearPde& pde, const BasisOperators& ops,
                                                const SolverConfig& cfg) {
  const int n = cfg.order;
  const int m = cfg.quantities;
  if (pde.quantities() != m) throw std::invalid_argument("materialize_volume_operator: m mismatch");
  if (ops.n != n) throw std::invalid_argument("materialize_volume_operator: order mismatch");
  const long dim = static_cast<long>(n) * n * n * m;
  if (dim > 4096) throw std::invalid_argument("materialize_volume_operator: N^3*m exceeds 4096");
  std::vector<double> v(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> unit(dim, 0.0), col(dim), fw(dim), gw(dim);
  for (long j = 0; j < dim; ++j) {
    unit[j] = 1.0;
    detail::apply_volume_once(pde, ops, unit.data(), col.data(), fw.data(), gw.data());
    unit[j] = 0.0;
    for (long r = 0; r < dim; ++r) v[static_cast<std::size_t>(r) * dim + j] = col[r];
  }
  return v;
}

}  // namespace ader
