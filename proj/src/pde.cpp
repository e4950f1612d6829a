#include "ader/pde.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ader {

namespace {
constexpr int kMaxQuantities = 64;
}

void LinearPde::ncp(const double* grad, int dim, double* out) const {
  (void)grad;
  (void)dim;
  for (int s = 0; s < m_; ++s) out[s] = 0.0;
}

void LinearPde::flux_vect(const double* q, int dim, double* f, int len, int stride) const {
  double qi[kMaxQuantities], fi[kMaxQuantities];
  for (int i = 0; i < len; ++i) {
    for (int s = 0; s < m_; ++s) qi[s] = q[s * stride + i];
    flux(qi, dim, fi);
    for (int s = 0; s < m_; ++s) f[s * stride + i] = fi[s];
  }
}

void LinearPde::ncp_vect(const double* grad, int dim, double* out, int len, int stride) const {
  double gi[kMaxQuantities], oi[kMaxQuantities];
  for (int i = 0; i < len; ++i) {
    for (int s = 0; s < m_; ++s) gi[s] = grad[s * stride + i];
    ncp(gi, dim, oi);
    for (int s = 0; s < m_; ++s) out[s * stride + i] = oi[s];
  }
}

void LinearPde::source_derivative(int, double, int, double* out) const {
  for (int s = 0; s < m_; ++s) out[s] = 0.0;
}

std::array<double, 3> LinearPde::source_position(int) const { return {0.5, 0.5, 0.5}; }

namespace {

// g(t) = amplitude * exp(-u^2/2), u = (t-center)/width. The o-th derivative
// is amplitude * (-1/width)^o * He_o(u) * exp(-u^2/2) with the probabilists'
// Hermite polynomials He_{k+1}(u) = u He_k(u) - k He_{k-1}(u).
double gaussian_derivative(const PointSourceSpec& s, int order, double t) {
  const double u = (t - s.center) / s.width;
  double he_prev = 0.0, he = 1.0;
  for (int k = 0; k < order; ++k) {
    double he_next = u * he - k * he_prev;
    he_prev = he;
    he = he_next;
  }
  double scale = 1.0;
  for (int k = 0; k < order; ++k) scale *= -1.0 / s.width;
  return s.amplitude * scale * he * std::exp(-0.5 * u * u);
}

class AdvectionPde final : public LinearPde {
public:
  AdvectionPde(const std::array<double, 3>& v, int m) : LinearPde(m, 0), v_(v) {}

  void flux(const double* q, int dim, double* f) const override {
    const double c = -v_[dim];
    for (int s = 0; s < m_; ++s) f[s] = c * q[s];
  }

  void flux_vect(const double* q, int dim, double* f, int len, int stride) const override {
    const double c = -v_[dim];
    for (int s = 0; s < m_; ++s) {
      const double* qs = q + s * stride;
      double* fs = f + s * stride;
#pragma omp simd
      for (int i = 0; i < len; ++i) fs[i] = c * qs[i];
    }
  }

  double max_wavespeed() const override {
    return std::max({std::abs(v_[0]), std::abs(v_[1]), std::abs(v_[2])});
  }

private:
  std::array<double, 3> v_;
};

class NcpAdvectionPde final : public LinearPde {
public:
  NcpAdvectionPde(const std::array<double, 3>& v, int m) : LinearPde(m, 0), v_(v) {}

  void flux(const double*, int, double* f) const override {
    for (int s = 0; s < m_; ++s) f[s] = 0.0;
  }

  void flux_vect(const double*, int, double* f, int len, int stride) const override {
    for (int s = 0; s < m_; ++s) {
      double* fs = f + s * stride;
#pragma omp simd
      for (int i = 0; i < len; ++i) fs[i] = 0.0;
    }
  }

  void ncp(const double* grad, int dim, double* out) const override {
    const double c = -v_[dim];
    for (int s = 0; s < m_; ++s) out[s] = c * grad[s];
  }

  void ncp_vect(const double* grad, int dim, double* out, int len, int stride) const override {
    const double c = -v_[dim];
    for (int s = 0; s < m_; ++s) {
      const double* gs = grad + s * stride;
      double* os = out + s * stride;
#pragma omp simd
      for (int i = 0; i < len; ++i) os[i] = c * gs[i];
    }
  }

  double max_wavespeed() const override {
    return std::max({std::abs(v_[0]), std::abs(v_[1]), std::abs(v_[2])});
  }

private:
  std::array<double, 3> v_;
};

// Index triples feeding each nonzero output row of the demo flux; rows 3..5
// are zero. The y and z tables rotate the x table through (0 1 2)(3 4 5).
struct DemoRow {
  int out;
  int in[3];
};
constexpr DemoRow kDemoRows[3][3] = {
    {{0, {0, 3, 4}}, {1, {1, 3, 5}}, {2, {2, 4, 5}}},
    {{1, {1, 4, 5}}, {2, {2, 4, 3}}, {0, {0, 5, 3}}},
    {{2, {2, 5, 3}}, {0, {0, 5, 4}}, {1, {1, 3, 4}}},
};

class PaperDemoPde final : public LinearPde {
public:
  PaperDemoPde() : LinearPde(6, 0) {}

  void flux(const double* q, int dim, double* f) const override {
    for (int s = 0; s < 6; ++s) f[s] = 0.0;
    for (const DemoRow& r : kDemoRows[dim])
      f[r.out] = -(q[r.in[0]] + q[r.in[1]] + q[r.in[2]]);
  }

  void flux_vect(const double* q, int dim, double* f, int len, int stride) const override {
    for (int s = 0; s < 6; ++s) {
      double* fs = f + s * stride;
#pragma omp simd
      for (int i = 0; i < len; ++i) fs[i] = 0.0;
    }
    for (const DemoRow& r : kDemoRows[dim]) {
      double* fs = f + r.out * stride;
      const double* a = q + r.in[0] * stride;
      const double* b = q + r.in[1] * stride;
      const double* c = q + r.in[2] * stride;
#pragma omp simd
      for (int i = 0; i < len; ++i) fs[i] = -(a[i] + b[i] + c[i]);
    }
  }

  // Gershgorin bound on the flux coefficient matrices; used only for
  // timestep selection in tests
  double max_wavespeed() const override { return 3.0; }
};

// state: 0 sxx, 1 syy, 2 szz, 3 sxy, 4 sxz, 5 syz, 6 u, 7 v, 8 w
class ElasticPde final : public LinearPde {
public:
  ElasticPde(double lambda, double mu, double rho, int n_sources, const PointSourceSpec& src)
      : LinearPde(9, n_sources), lam_(lambda), mu_(mu), inv_rho_(1.0 / rho), src_(src) {
    if (!(rho > 0.0) || mu < 0.0 || !(lambda + 2.0 * mu > 0.0))
      throw std::invalid_argument("elastic_pde: need rho > 0, mu >= 0, lambda + 2mu > 0");
    cp_ = std::sqrt((lambda + 2.0 * mu) / rho);
  }

  void flux(const double* q, int dim, double* f) const override {
    const double lp2m = lam_ + 2.0 * mu_;
    const double u = q[6], v = q[7], w = q[8];
    switch (dim) {
      case 0:
        f[0] = lp2m * u;
        f[1] = lam_ * u;
        f[2] = lam_ * u;
        f[3] = mu_ * v;
        f[4] = mu_ * w;
        f[5] = 0.0;
        f[6] = inv_rho_ * q[0];
        f[7] = inv_rho_ * q[3];
        f[8] = inv_rho_ * q[4];
        break;
      case 1:
        f[0] = lam_ * v;
        f[1] = lp2m * v;
        f[2] = lam_ * v;
        f[3] = mu_ * u;
        f[4] = 0.0;
        f[5] = mu_ * w;
        f[6] = inv_rho_ * q[3];
        f[7] = inv_rho_ * q[1];
        f[8] = inv_rho_ * q[5];
        break;
      default:
        f[0] = lam_ * w;
        f[1] = lam_ * w;
        f[2] = lp2m * w;
        f[3] = 0.0;
        f[4] = mu_ * u;
        f[5] = mu_ * v;
        f[6] = inv_rho_ * q[4];
        f[7] = inv_rho_ * q[5];
        f[8] = inv_rho_ * q[2];
        break;
    }
  }

  void flux_vect(const double* q, int dim, double* f, int len, int stride) const override {
    const double lp2m = lam_ + 2.0 * mu_;
    // coefficient table per output row: f[s] = c0*q[i0] (+ c1*q[i1])
    struct Term {
      int i0;
      double c0;
    };
    Term t[9];
    switch (dim) {
      case 0:
        t[0] = {6, lp2m};
        t[1] = {6, lam_};
        t[2] = {6, lam_};
        t[3] = {7, mu_};
        t[4] = {8, mu_};
        t[5] = {8, 0.0};
        t[6] = {0, inv_rho_};
        t[7] = {3, inv_rho_};
        t[8] = {4, inv_rho_};
        break;
      case 1:
        t[0] = {7, lam_};
        t[1] = {7, lp2m};
        t[2] = {7, lam_};
        t[3] = {6, mu_};
        t[4] = {6, 0.0};
        t[5] = {8, mu_};
        t[6] = {3, inv_rho_};
        t[7] = {1, inv_rho_};
        t[8] = {5, inv_rho_};
        break;
      default:
        t[0] = {8, lam_};
        t[1] = {8, lam_};
        t[2] = {8, lp2m};
        t[3] = {8, 0.0};
        t[4] = {6, mu_};
        t[5] = {7, mu_};
        t[6] = {4, inv_rho_};
        t[7] = {5, inv_rho_};
        t[8] = {2, inv_rho_};
        break;
    }
    for (int s = 0; s < 9; ++s) {
      const double* qs = q + t[s].i0 * stride;
      const double c = t[s].c0;
      double* fs = f + s * stride;
#pragma omp simd
      for (int i = 0; i < len; ++i) fs[i] = c * qs[i];
    }
  }

  void source_derivative(int order, double t, int, double* out) const override {
    for (int s = 0; s < 9; ++s) out[s] = 0.0;
    out[src_.component] = gaussian_derivative(src_, order, t);
  }

  std::array<double, 3> source_position(int) const override { return src_.position; }

  double max_wavespeed() const override { return cp_; }

private:
  double lam_, mu_, inv_rho_, cp_;
  PointSourceSpec src_;
};

class SourceOnlyPde final : public LinearPde {
public:
  SourceOnlyPde(int m, const PointSourceSpec& src) : LinearPde(m, 1), src_(src) {
    if (src.component < 0 || src.component >= m)
      throw std::invalid_argument("source_only_pde: component out of range");
  }

  void flux(const double*, int, double* f) const override {
    for (int s = 0; s < m_; ++s) f[s] = 0.0;
  }

  void source_derivative(int order, double t, int, double* out) const override {
    for (int s = 0; s < m_; ++s) out[s] = 0.0;
    out[src_.component] = gaussian_derivative(src_, order, t);
  }

  std::array<double, 3> source_position(int) const override { return src_.position; }

  double max_wavespeed() const override { return 0.0; }

private:
  PointSourceSpec src_;
};

void check_quantities(int m) {
  if (m < 1 || m > kMaxQuantities)
    throw std::invalid_argument("pde: quantity count out of range");
}

}  // namespace

std::unique_ptr<LinearPde> advection_pde(const std::array<double, 3>& velocity, int m) {
  check_quantities(m);
  return std::make_unique<AdvectionPde>(velocity, m);
}

std::unique_ptr<LinearPde> ncp_advection_pde(const std::array<double, 3>& velocity, int m) {
  check_quantities(m);
  return std::make_unique<NcpAdvectionPde>(velocity, m);
}

std::unique_ptr<LinearPde> paper_demo_pde() { return std::make_unique<PaperDemoPde>(); }

std::unique_ptr<LinearPde> elastic_pde(double lambda, double mu, double rho) {
  return std::make_unique<ElasticPde>(lambda, mu, rho, 0, PointSourceSpec{});
}

std::unique_ptr<LinearPde> elastic_pde(double lambda, double mu, double rho,
                                       const PointSourceSpec& source) {
  if (source.component < 6 || source.component > 8)
    throw std::invalid_argument("elastic_pde: source must act on a velocity component (6..8)");
  return std::make_unique<ElasticPde>(lambda, mu, rho, 1, source);
}

std::unique_ptr<LinearPde> source_only_pde(int m, const PointSourceSpec& source) {
  check_quantities(m);
  return std::make_unique<SourceOnlyPde>(m, source);
}

}  // namespace ader
