#ifndef ADER_SOLVER_HPP
#define ADER_SOLVER_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "ader/predictor.hpp"

namespace ader {

// q(x, y, z, t) -> m values; used for initial data and error reference.
using AnalyticFn = std::function<void(double, double, double, double, double*)>;

// Uniform periodic Cartesian mesh on [0, domain_len]^3, e elements per
// dimension, one AoS tensor of nodal DOFs per element.
struct Mesh {
  int e = 1;
  double domain_len = 1.0;
  double h = 1.0;
  LayoutSpec spec;
  std::vector<ElementTensor> cells;

  Mesh(int elements_per_dim, const SolverConfig& cfg, double domain_len = 1.0);

  int cell_index(int ix, int iy, int iz) const {
    auto wrap = [this](int i) { return (i % e + e) % e; };
    return (wrap(iz) * e + wrap(iy)) * e + wrap(ix);
  }

  // nodal interpolation of f at t = 0
  void set_initial(const BasisOperators& ops, const AnalyticFn& f);

  // sqrt of the quadrature of |q - exact|^2 over the domain, all quantities
  double l2_error(const BasisOperators& ops, const AnalyticFn& exact, double t) const;

  // quadrature integral of quantity s over the domain
  double integral(const BasisOperators& ops, int s) const;

  bool finite() const;

  // one line per node: "x y z q0 ... qm-1"
  void dump_fields(std::ostream& os, const BasisOperators& ops) const;
};

// View of a PDE with the flux/ncp coefficients scaled by grad_scale and the
// source amplitudes by source_scale; how the reference-element kernels are
// driven on a physical element of size h (grad_scale = 1/h,
// source_scale = 1/h^3).
class ScaledPde final : public LinearPde {
public:
  ScaledPde(const LinearPde& base, double grad_scale, double source_scale);

  void flux(const double* q, int dim, double* f) const override;
  void ncp(const double* grad, int dim, double* out) const override;
  void flux_vect(const double* q, int dim, double* f, int len, int stride) const override;
  void ncp_vect(const double* grad, int dim, double* out, int len, int stride) const override;
  void source_derivative(int order, double t, int src, double* out) const override;
  std::array<double, 3> source_position(int src) const override;
  double max_wavespeed() const override;

private:
  const LinearPde& base_;
  double grad_scale_, source_scale_;
};

// 0.5*(FnL + FnR) - 0.5*smax*(qR - qL), componentwise over conforming face
// arrays. With the q_t = div F sign convention the dissipation term makes
// the second state the upwind one: the corrector passes (plus-side,
// minus-side) traces in that order.
std::vector<double> rusanov_flux(const std::vector<double>& q_l, const std::vector<double>& q_r,
                                 const std::vector<double>& fn_l, const std::vector<double>& fn_r,
                                 double smax);

// dt = cfl * h / (d * smax * (2N - 1)); +inf when smax is 0 (the caller caps
// by the output interval).
double stable_dt(const Mesh& mesh, const LinearPde& pde, const SolverConfig& cfg);

// Advance the mesh by one step from the per-element predictor outputs
// (faces already extrapolated): volume contraction of qavg, source time
// integral, and Rusanov surface fluctuations scattered through the inverse
// mass. Throws on a non-finite update.
void corrector_step(Mesh& mesh, std::vector<PredictorOutput>& outs, const LinearPde& pde,
                    const BasisOperators& ops, double dt, double t = 0.0, int workers = 1);

struct RunResult {
  int steps = 0;
  double t_final = 0.0;
  double l2_error = -1.0;  // -1 when no reference was given
  bool stable = true;
};

// Predictor + face exchange + corrector loop until t_end.
RunResult run_simulation(const LinearPde& pde, const SolverConfig& cfg, Mesh& mesh, double t_end,
                         Variant variant, const AnalyticFn* exact = nullptr, int workers = 1);

}  // namespace ader

#endif
