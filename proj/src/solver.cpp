#include "ader/solver.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "predictor_detail.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ader {

Mesh::Mesh(int elements_per_dim, const SolverConfig& cfg, double domain_len_)
    : e(elements_per_dim), domain_len(domain_len_) {
  if (e < 1) throw std::invalid_argument("Mesh: need at least one element per dimension");
  if (!(domain_len > 0.0)) throw std::invalid_argument("Mesh: domain length must be positive");
  h = domain_len / e;
  spec = LayoutSpec::aos(cfg.order, cfg.quantities, cfg.vec_width);
  cells.reserve(static_cast<std::size_t>(e) * e * e);
  for (int i = 0; i < e * e * e; ++i) cells.emplace_back(spec);
}

void Mesh::set_initial(const BasisOperators& ops, const AnalyticFn& f) {
  const int n = spec.n, m = spec.m;
  double q[detail::kMaxQuantities];
  for (int iz = 0; iz < e; ++iz)
    for (int iy = 0; iy < e; ++iy)
      for (int ix = 0; ix < e; ++ix) {
        ElementTensor& cell = cells[cell_index(ix, iy, iz)];
        for (int k3 = 0; k3 < n; ++k3)
          for (int k2 = 0; k2 < n; ++k2)
            for (int k1 = 0; k1 < n; ++k1) {
              const double x = (ix + ops.nodes[k1]) * h;
              const double y = (iy + ops.nodes[k2]) * h;
              const double z = (iz + ops.nodes[k3]) * h;
              f(x, y, z, 0.0, q);
              for (int s = 0; s < m; ++s) cell.at(k3, k2, k1, s) = q[s];
            }
      }
}

double Mesh::l2_error(const BasisOperators& ops, const AnalyticFn& exact, double t) const {
  const int n = spec.n, m = spec.m;
  const double vol = h * h * h;
  double q[detail::kMaxQuantities];
  double acc = 0.0;
  for (int iz = 0; iz < e; ++iz)
    for (int iy = 0; iy < e; ++iy)
      for (int ix = 0; ix < e; ++ix) {
        const ElementTensor& cell = cells[cell_index(ix, iy, iz)];
        for (int k3 = 0; k3 < n; ++k3)
          for (int k2 = 0; k2 < n; ++k2)
            for (int k1 = 0; k1 < n; ++k1) {
              const double x = (ix + ops.nodes[k1]) * h;
              const double y = (iy + ops.nodes[k2]) * h;
              const double z = (iz + ops.nodes[k3]) * h;
              exact(x, y, z, t, q);
              const double w = ops.weights[k1] * ops.weights[k2] * ops.weights[k3] * vol;
              for (int s = 0; s < m; ++s) {
                const double diff = cell.at(k3, k2, k1, s) - q[s];
                acc += w * diff * diff;
              }
            }
      }
  return std::sqrt(acc);
}

double Mesh::integral(const BasisOperators& ops, int s) const {
  const int n = spec.n;
  const double vol = h * h * h;
  double acc = 0.0;
  for (const ElementTensor& cell : cells)
    for (int k3 = 0; k3 < n; ++k3)
      for (int k2 = 0; k2 < n; ++k2)
        for (int k1 = 0; k1 < n; ++k1)
          acc += ops.weights[k1] * ops.weights[k2] * ops.weights[k3] * vol * cell.at(k3, k2, k1, s);
  return acc;
}

bool Mesh::finite() const {
  for (const ElementTensor& cell : cells) {
    const double* d = cell.data();
    for (std::size_t i = 0; i < cell.size(); ++i)
      if (!std::isfinite(d[i])) return false;
  }
  return true;
}

void Mesh::dump_fields(std::ostream& os, const BasisOperators& ops) const {
  const int n = spec.n, m = spec.m;
  for (int iz = 0; iz < e; ++iz)
    for (int iy = 0; iy < e; ++iy)
      for (int ix = 0; ix < e; ++ix) {
        const ElementTensor& cell = cells[cell_index(ix, iy, iz)];
        for (int k3 = 0; k3 < n; ++k3)
          for (int k2 = 0; k2 < n; ++k2)
            for (int k1 = 0; k1 < n; ++k1) {
              os << format_double((ix + ops.nodes[k1]) * h) << ' '
                 << format_double((iy + ops.nodes[k2]) * h) << ' '
                 << format_double((iz + ops.nodes[k3]) * h);
              for (int s = 0; s < m; ++s) os << ' ' << format_double(cell.at(k3, k2, k1, s));
              os << '\n';
            }
      }
}

ScaledPde::ScaledPde(const LinearPde& base, double grad_scale, double source_scale)
    : LinearPde(base.quantities(), base.source_count()),
      base_(base),
      grad_scale_(grad_scale),
      source_scale_(source_scale) {}

void ScaledPde::flux(const double* q, int dim, double* f) const {
  base_.flux(q, dim, f);
  for (int s = 0; s < m_; ++s) f[s] *= grad_scale_;
}

void ScaledPde::ncp(const double* grad, int dim, double* out) const {
  base_.ncp(grad, dim, out);
  for (int s = 0; s < m_; ++s) out[s] *= grad_scale_;
}

void ScaledPde::flux_vect(const double* q, int dim, double* f, int len, int stride) const {
  base_.flux_vect(q, dim, f, len, stride);
  const double c = grad_scale_;
  for (int s = 0; s < m_; ++s) {
    double* fs = f + s * stride;
#pragma omp simd
    for (int i = 0; i < len; ++i) fs[i] *= c;
  }
}

void ScaledPde::ncp_vect(const double* grad, int dim, double* out, int len, int stride) const {
  base_.ncp_vect(grad, dim, out, len, stride);
  const double c = grad_scale_;
  for (int s = 0; s < m_; ++s) {
    double* os_ = out + s * stride;
#pragma omp simd
    for (int i = 0; i < len; ++i) os_[i] *= c;
  }
}

void ScaledPde::source_derivative(int order, double t, int src, double* out) const {
  base_.source_derivative(order, t, src, out);
  for (int s = 0; s < m_; ++s) out[s] *= source_scale_;
}

std::array<double, 3> ScaledPde::source_position(int src) const {
  return base_.source_position(src);
}

double ScaledPde::max_wavespeed() const { return grad_scale_ * base_.max_wavespeed(); }

std::vector<double> rusanov_flux(const std::vector<double>& q_l, const std::vector<double>& q_r,
                                 const std::vector<double>& fn_l, const std::vector<double>& fn_r,
                                 double smax) {
  const std::size_t len = q_l.size();
  if (q_r.size() != len || fn_l.size() != len || fn_r.size() != len)
    throw std::invalid_argument("rusanov_flux: face array shape mismatch");
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i)
    out[i] = 0.5 * (fn_l[i] + fn_r[i]) - 0.5 * smax * (q_r[i] - q_l[i]);
  return out;
}

double stable_dt(const Mesh& mesh, const LinearPde& pde, const SolverConfig& cfg) {
  const double smax = pde.max_wavespeed();
  if (smax <= 0.0) return std::numeric_limits<double>::infinity();
  return cfg.cfl * mesh.h / (3.0 * smax * (2.0 * cfg.order - 1.0));
}

namespace {

struct CorrectorWork {
  std::vector<double> qbar, vol, fw, gw;
  std::vector<double> fhat;
};

// per-element update: volume + sources + surface fluctuations
void correct_cell(Mesh& mesh, std::vector<PredictorOutput>& outs, const ScaledPde& scaled,
                  const BasisOperators& ops,
                  const std::vector<std::vector<double>>& source_proj,
                  const std::vector<std::vector<double>>& source_integral, int ix, int iy, int iz,
                  CorrectorWork& work) {
  const LayoutSpec& sp = mesh.spec;
  const int n = sp.n, m = sp.m, mp = sp.m_pad;
  const int nn = n * n * n;
  const int c = mesh.cell_index(ix, iy, iz);
  ElementTensor& cell = mesh.cells[c];
  const PredictorOutput& mine = outs[c];

  // volume term, same contraction machinery applied to qavg
  const double* qavg = mine.qavg.data();
  for (int k = 0; k < nn; ++k)
    for (int s = 0; s < m; ++s) work.qbar[static_cast<long>(k) * m + s] = qavg[static_cast<long>(k) * mp + s];
  detail::apply_volume_once(scaled, ops, work.qbar.data(), work.vol.data(), work.fw.data(),
                            work.gw.data());
  double* u = cell.data();
  for (int k = 0; k < nn; ++k)
    for (int s = 0; s < m; ++s) u[static_cast<long>(k) * mp + s] += work.vol[static_cast<long>(k) * m + s];

  // point sources: projection times the time integral of the amplitude
  for (std::size_t src = 0; src < source_proj.size(); ++src) {
    const std::vector<double>& proj = source_proj[src];
    const std::vector<double>& sint = source_integral[src];
    for (int k = 0; k < nn; ++k) {
      const double pk = proj[k];
      if (pk == 0.0) continue;
      for (int s = 0; s < m; ++s) u[static_cast<long>(k) * mp + s] += pk * sint[s];
    }
  }

  // surface terms
  const double smax = scaled.max_wavespeed();
  const std::size_t face_len = static_cast<std::size_t>(n) * n * m;
  for (int d = 0; d < 3; ++d) {
    for (int side = 0; side < 2; ++side) {
      const int step = side == 0 ? -1 : 1;
      const int nb = mesh.cell_index(ix + (d == 0 ? step : 0), iy + (d == 1 ? step : 0),
                                     iz + (d == 2 ? step : 0));
      const PredictorOutput& theirs = outs[nb];
      // plus side of the face is the element in the +d direction
      const std::vector<double>& q_plus = side == 1 ? theirs.face_q[2 * d] : mine.face_q[2 * d];
      const std::vector<double>& q_minus =
          side == 1 ? mine.face_q[2 * d + 1] : theirs.face_q[2 * d + 1];
      const std::vector<double>& f_plus = side == 1 ? theirs.face_f[2 * d] : mine.face_f[2 * d];
      const std::vector<double>& f_minus =
          side == 1 ? mine.face_f[2 * d + 1] : theirs.face_f[2 * d + 1];
      for (std::size_t i = 0; i < face_len; ++i)
        work.fhat[i] = 0.5 * (f_plus[i] + f_minus[i]) - 0.5 * smax * (q_minus[i] - q_plus[i]);

      const std::vector<double>& f_self = mine.face_f[2 * d + side];
      const double* coeff = side == 0 ? ops.face_left.data() : ops.face_right.data();
      const double sign = side == 0 ? -1.0 : 1.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double* fh = work.fhat.data() + (static_cast<std::size_t>(a) * n + b) * m;
          const double* fs = f_self.data() + (static_cast<std::size_t>(a) * n + b) * m;
          for (int j = 0; j < n; ++j) {
            const double scale = sign * coeff[j] * ops.inv_weights[j];
            const std::size_t idx = d == 0   ? sp.index(a, b, j, 0)
                                    : d == 1 ? sp.index(a, j, b, 0)
                                             : sp.index(j, a, b, 0);
            for (int s = 0; s < m; ++s) u[idx + s] += scale * (fh[s] - fs[s]);
          }
        }
    }
  }
}

}  // namespace

void corrector_step(Mesh& mesh, std::vector<PredictorOutput>& outs, const LinearPde& pde,
                    const BasisOperators& ops, double dt, double t, int workers) {
  if (outs.size() != mesh.cells.size())
    throw std::invalid_argument("corrector_step: one predictor output per element required");
  const double h = mesh.h;
  const ScaledPde scaled(pde, 1.0 / h, 1.0 / (h * h * h));
  const int n = mesh.spec.n, m = mesh.spec.m;
  const int nn = n * n * n;

  // time integral of each source amplitude, truncated like the predictor
  std::vector<std::vector<double>> source_proj, source_integral;
  for (int src = 0; src < pde.source_count(); ++src) {
    source_proj.push_back(point_source_projection(ops, pde.source_position(src)));
    std::vector<double> sint(m, 0.0);
    double amp[detail::kMaxQuantities];
    double coeff = dt;
    for (int o = 0; o < n; ++o) {
      scaled.source_derivative(o, t, src, amp);
      for (int s = 0; s < m; ++s) sint[s] += coeff * amp[s];
      coeff *= dt / (o + 2);
    }
    source_integral.push_back(std::move(sint));
  }

  const int e = mesh.e;
  const int cells = e * e * e;
  (void)workers;
#ifdef _OPENMP
#pragma omp parallel num_threads(workers > 0 ? workers : 1)
  {
    CorrectorWork work{std::vector<double>(static_cast<std::size_t>(nn) * m),
                       std::vector<double>(static_cast<std::size_t>(nn) * m),
                       std::vector<double>(static_cast<std::size_t>(nn) * m),
                       std::vector<double>(static_cast<std::size_t>(nn) * m),
                       std::vector<double>(static_cast<std::size_t>(n) * n * m)};
#pragma omp for schedule(static)
    for (int c = 0; c < cells; ++c) {
      const int ix = c % e, iy = (c / e) % e, iz = c / (e * e);
      correct_cell(mesh, outs, scaled, ops, source_proj, source_integral, ix, iy, iz, work);
    }
  }
#else
  CorrectorWork work{std::vector<double>(static_cast<std::size_t>(nn) * m),
                     std::vector<double>(static_cast<std::size_t>(nn) * m),
                     std::vector<double>(static_cast<std::size_t>(nn) * m),
                     std::vector<double>(static_cast<std::size_t>(nn) * m),
                     std::vector<double>(static_cast<std::size_t>(n) * n * m)};
  for (int c = 0; c < cells; ++c) {
    const int ix = c % e, iy = (c / e) % e, iz = c / (e * e);
    correct_cell(mesh, outs, scaled, ops, source_proj, source_integral, ix, iy, iz, work);
  }
#endif

  if (!mesh.finite()) throw std::runtime_error("corrector_step: non-finite update (unstable)");
}

RunResult run_simulation(const LinearPde& pde, const SolverConfig& cfg, Mesh& mesh, double t_end,
                         Variant variant, const AnalyticFn* exact, int workers) {
  const BasisOperators ops = make_basis(cfg.order);
  const double h = mesh.h;
  const ScaledPde scaled(pde, 1.0 / h, 1.0 / (h * h * h));
  const int cells = mesh.e * mesh.e * mesh.e;
  const int nw = workers > 0 ? workers : 1;

  std::vector<PredictorOutput> outs;
  outs.reserve(cells);
  for (int c = 0; c < cells; ++c) outs.emplace_back(mesh.spec);
  std::vector<ScratchArena> arenas;
  arenas.reserve(nw);
  for (int w = 0; w < nw; ++w) arenas.emplace_back(variant, cfg);

  RunResult res;
  const double dt0 = stable_dt(mesh, pde, cfg);
  double t = 0.0;
  while (t < t_end - 1e-14 * std::max(1.0, t_end)) {
    const double dt = std::min(dt0, t_end - t);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nw)
#endif
    for (int c = 0; c < cells; ++c) {
#ifdef _OPENMP
      ScratchArena& arena = arenas[omp_get_thread_num() % nw];
#else
      ScratchArena& arena = arenas[0];
#endif
      predict(variant, mesh.cells[c], scaled, dt, ops, arena, outs[c], t);
      extrapolate_faces(outs[c], ops);
    }

    try {
      corrector_step(mesh, outs, pde, ops, dt, t, nw);
    } catch (const std::runtime_error&) {
      res.stable = false;
      break;
    }
    t += dt;
    res.steps += 1;
  }
  res.t_final = t;
  if (exact && res.stable) res.l2_error = mesh.l2_error(ops, *exact, t);
  return res;
}

}  // namespace ader
