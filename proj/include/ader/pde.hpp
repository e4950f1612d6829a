#ifndef ADER_PDE_HPP
#define ADER_PDE_HPP

#include <array>
#include <memory>

namespace ader {

// A linear hyperbolic system q_t = div F(q) + B . grad q + S. Flux and
// non-conservative coefficients are constant; everything here is linear in
// the state, which the kernels and the corrector rely on. Implementations
// are immutable and safe to share between workers.
//
// Pointwise user functions operate on one node's m-vector. The chunked
// (`_vect`) forms apply the same map to `len` nodes laid out
// structure-of-arrays: quantity s of lane i lives at [s*stride + i]. The
// default chunked implementations loop the pointwise form lane by lane;
// concrete systems override them with stride-indexed SIMD loops. Chunks may
// include zero-padded lanes; linearity guarantees finite (zero) output for
// them.
class LinearPde {
public:
  LinearPde(int m, int n_sources) : m_(m), n_sources_(n_sources) {}
  virtual ~LinearPde() = default;

  int quantities() const { return m_; }
  int source_count() const { return n_sources_; }

  // f := F_dim(q)
  virtual void flux(const double* q, int dim, double* f) const = 0;
  // out := B_dim * grad, where grad is the dim-direction gradient of q
  virtual void ncp(const double* grad, int dim, double* out) const;

  virtual void flux_vect(const double* q, int dim, double* f, int len, int stride) const;
  virtual void ncp_vect(const double* grad, int dim, double* out, int len, int stride) const;

  // order-th time derivative of the source amplitude vector at time t
  virtual void source_derivative(int order, double t, int src, double* out) const;
  virtual std::array<double, 3> source_position(int src) const;

  virtual double max_wavespeed() const = 0;

protected:
  int m_;
  int n_sources_;
};

// Dirac point source with a Gaussian time amplitude
//   g(t) = amplitude * exp(-(t - center)^2 / (2 width^2))
// acting on one state component. Time derivatives of g come from the
// probabilists' Hermite recurrence and are exact.
struct PointSourceSpec {
  std::array<double, 3> position{0.5, 0.5, 0.5};
  int component = 0;
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
};

// All m quantities advected with the same constant velocity:
// F_d(Q) = -v_d * Q, no ncp, no sources.
std::unique_ptr<LinearPde> advection_pde(const std::array<double, 3>& velocity, int m);

// Same dynamics as advection_pde but routed through the non-conservative
// term: F = 0, B_d * g = -v_d * g.
std::unique_ptr<LinearPde> ncp_advection_pde(const std::array<double, 3>& velocity, int m);

// Six-quantity demonstration system with the hard-coded x-flux
//   F0 = -(Q0+Q3+Q4), F1 = -(Q1+Q3+Q5), F2 = -(Q2+Q4+Q5), F3..F5 = 0
// and y/z fluxes by cyclic rotation of the quantity indices
// (0 1 2)(3 4 5).
std::unique_ptr<LinearPde> paper_demo_pde();

// 3D isotropic elastic wave equations in first-order velocity-stress form,
// state (sxx, syy, szz, sxy, sxz, syz, u, v, w). Wave speeds
// cp = sqrt((lambda+2mu)/rho), cs = sqrt(mu/rho). Optionally carries one
// Gaussian point source acting on a velocity component.
std::unique_ptr<LinearPde> elastic_pde(double lambda, double mu, double rho);
std::unique_ptr<LinearPde> elastic_pde(double lambda, double mu, double rho,
                                       const PointSourceSpec& source);

// Zero flux and ncp, point sources only; exercises the source path on its
// own.
std::unique_ptr<LinearPde> source_only_pde(int m, const PointSourceSpec& source);

}  // namespace ader

#endif
