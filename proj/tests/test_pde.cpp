#include <cmath>
#include <vector>

#include "ader/pde.hpp"
#include "ader/util.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace ader;

namespace {

// flux coefficient matrix by probing with unit vectors
std::vector<double> flux_matrix(const LinearPde& pde, int dim) {
  const int m = pde.quantities();
  std::vector<double> a(static_cast<std::size_t>(m) * m), unit(m, 0.0), col(m);
  for (int j = 0; j < m; ++j) {
    unit[j] = 1.0;
    pde.flux(unit.data(), dim, col.data());
    unit[j] = 0.0;
    for (int r = 0; r < m; ++r) a[r * m + j] = col[r];
  }
  return a;
}

int matrix_rank(std::vector<double> a, int m) {
  int rank = 0;
  for (int col = 0; col < m && rank < m; ++col) {
    int piv = -1;
    double best = 1e-10;
    for (int r = rank; r < m; ++r)
      if (std::abs(a[r * m + col]) > best) {
        best = std::abs(a[r * m + col]);
        piv = r;
      }
    if (piv < 0) continue;
    for (int c = 0; c < m; ++c) std::swap(a[piv * m + c], a[rank * m + c]);
    for (int r = 0; r < m; ++r) {
      if (r == rank) continue;
      const double f = a[r * m + col] / a[rank * m + col];
      for (int c = 0; c < m; ++c) a[r * m + c] -= f * a[rank * m + c];
    }
    ++rank;
  }
  return rank;
}

void check_linearity(const LinearPde& pde, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int m = pde.quantities();
  std::vector<double> q1(m), q2(m), qc(m), f1(m), f2(m), fc(m);
  for (int trial = 0; trial < 25; ++trial) {
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
      for (int s = 0; s < m; ++s) CHECK(std::abs(fc[s] - (a * f1[s] + b * f2[s])) < 1e-13);
      pde.ncp(q1.data(), d, f1.data());
      pde.ncp(q2.data(), d, f2.data());
      pde.ncp(qc.data(), d, fc.data());
      for (int s = 0; s < m; ++s) CHECK(std::abs(fc[s] - (a * f1[s] + b * f2[s])) < 1e-13);
    }
  }
}

void check_vect_matches_pointwise(const LinearPde& pde, int len, int stride, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int m = pde.quantities();
  std::vector<double> chunk(static_cast<std::size_t>(m) * stride, 0.0);
  std::vector<double> fchunk(chunk.size(), 0.0), nchunk(chunk.size(), 0.0);
  std::vector<double> lane(m), flane(m);
  for (int s = 0; s < m; ++s)
    for (int i = 0; i < len; ++i) chunk[s * stride + i] = rng.next_symmetric();
  for (int d = 0; d < 3; ++d) {
    pde.flux_vect(chunk.data(), d, fchunk.data(), len, stride);
    pde.ncp_vect(chunk.data(), d, nchunk.data(), len, stride);
    for (int i = 0; i < len; ++i) {
      for (int s = 0; s < m; ++s) lane[s] = chunk[s * stride + i];
      pde.flux(lane.data(), d, flane.data());
      for (int s = 0; s < m; ++s) CHECK(fchunk[s * stride + i] == doctest::Approx(flane[s]).epsilon(1e-14));
      pde.ncp(lane.data(), d, flane.data());
      for (int s = 0; s < m; ++s) CHECK(nchunk[s * stride + i] == doctest::Approx(flane[s]).epsilon(1e-14));
    }
  }
}

}  // namespace

TEST_CASE("advection flux and wavespeed") {
  auto pde = advection_pde({1.0, 0.0, 0.0}, 2);
  double q[2] = {2.0, -3.0}, f[2];
  pde->flux(q, 0, f);
  CHECK(f[0] == -2.0);  // F_x = -v_x Q
  CHECK(f[1] == 3.0);
  pde->flux(q, 1, f);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 0.0);
  CHECK(pde->max_wavespeed() == 1.0);
  CHECK_THROWS(advection_pde({1.0, 0.0, 0.0}, 0));
}

TEST_CASE("advection linearity and chunk forms") {
  auto pde = advection_pde({1.0, 0.5, 0.25}, 4);
  check_linearity(*pde, 21);
  check_vect_matches_pointwise(*pde, 6, 8, 22);
}

TEST_CASE("demo system evaluates the hard-coded x-flux") {
  auto pde = paper_demo_pde();
  CHECK(pde->quantities() == 6);
  double q[6] = {1.0, 0.0, 0.0, 1.0, 1.0, 0.0};
  double f[6];
  pde->flux(q, 0, f);
  CHECK(f[0] == -3.0);
  CHECK(f[1] == -1.0);
  CHECK(f[2] == -1.0);
  CHECK(f[3] == 0.0);
  CHECK(f[4] == 0.0);
  CHECK(f[5] == 0.0);
}

TEST_CASE("demo system: zero state gives zero flux, all dims") {
  auto pde = paper_demo_pde();
  double q[6] = {0, 0, 0, 0, 0, 0}, f[6];
  for (int d = 0; d < 3; ++d) {
    pde->flux(q, d, f);
    for (int s = 0; s < 6; ++s) CHECK(f[s] == 0.0);
  }
}

TEST_CASE("demo chunked flux with chunk_len 6 stride 8 equals pointwise") {
  auto pde = paper_demo_pde();
  check_linearity(*pde, 23);
  check_vect_matches_pointwise(*pde, 6, 8, 24);
}

TEST_CASE("ncp advection routes the same dynamics through the gradient term") {
  auto pde = ncp_advection_pde({1.0, 0.5, 0.25}, 3);
  check_linearity(*pde, 25);
  check_vect_matches_pointwise(*pde, 6, 8, 26);
  double g[3] = {0.0, 0.0, 0.0}, out[3];
  pde->ncp(g, 0, out);
  for (int s = 0; s < 3; ++s) CHECK(out[s] == 0.0);  // zero gradient, zero term
  double q[3] = {1.0, 2.0, 3.0}, f[3];
  pde->flux(q, 0, f);
  for (int s = 0; s < 3; ++s) CHECK(f[s] == 0.0);  // flux-free formulation
  double g2[3] = {1.0, -1.0, 0.5};
  pde->ncp(g2, 1, out);
  CHECK(out[0] == -0.5);
  CHECK(out[1] == 0.5);
  CHECK(out[2] == -0.25);
}

TEST_CASE("elastic parameter validation") {
  CHECK_THROWS(elastic_pde(2.0, 1.0, 0.0));
  CHECK_THROWS(elastic_pde(2.0, -1.0, 1.0));
  CHECK_THROWS(elastic_pde(-4.0, 1.0, 1.0));  // lambda + 2mu <= 0
}

TEST_CASE("elastic x-flux coefficient matrix has speeds {+-cp, +-cs, +-cs, 0,0,0}") {
  const double lambda = 2.0, mu = 1.0, rho = 1.0;
  auto pde = elastic_pde(lambda, mu, rho);
  const double cp = std::sqrt((lambda + 2.0 * mu) / rho);
  const double cs = std::sqrt(mu / rho);
  CHECK(pde->max_wavespeed() == doctest::Approx(cp).epsilon(1e-15));

  const int m = 9;
  std::vector<double> a = flux_matrix(*pde, 0);

  // six explicit eigenpairs: P modes and the two shear pairs
  // state: sxx syy szz sxy sxz syz u v w
  auto check_pair = [&](const std::vector<double>& v, double lambda_eig) {
    std::vector<double> av(m, 0.0);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) av[r] += a[r * m + c] * v[c];
    double scale = 0.0;
    for (int r = 0; r < m; ++r) scale = std::max(scale, std::abs(v[r]));
    for (int r = 0; r < m; ++r) CHECK(std::abs(av[r] - lambda_eig * v[r]) < 1e-12 * scale);
  };
  for (double sgn : {1.0, -1.0}) {
    // P wave: u coupled to the three normal stresses; the mode with
    // sigma_xx = -c rho u belongs to eigenvalue -c
    std::vector<double> p(m, 0.0);
    p[6] = 1.0;
    p[0] = -sgn * cp * rho;
    p[1] = -sgn * lambda / cp;
    p[2] = -sgn * lambda / cp;
    check_pair(p, -sgn * cp);
    // S waves: (sxy, v) and (sxz, w)
    std::vector<double> s1(m, 0.0);
    s1[7] = 1.0;
    s1[3] = -sgn * cs * rho;
    check_pair(s1, -sgn * cs);
    std::vector<double> s2(m, 0.0);
    s2[8] = 1.0;
    s2[4] = -sgn * cs * rho;
    check_pair(s2, -sgn * cs);
  }
  // the remaining three eigenvalues are zero: rank 6
  CHECK(matrix_rank(a, m) == 6);
}

TEST_CASE("elastic: zero velocity and isotropic stress drives only velocity rows") {
  auto pde = elastic_pde(2.0, 1.0, 1.0);
  double q[9] = {1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  double f[9];
  pde->flux(q, 0, f);
  for (int s = 0; s < 6; ++s) CHECK(f[s] == 0.0);
  CHECK(f[6] == 1.0);  // sxx / rho
  CHECK(f[7] == 0.0);
  CHECK(f[8] == 0.0);
}

TEST_CASE("elastic linearity and chunk forms") {
  auto pde = elastic_pde(2.0, 1.0, 1.0);
  check_linearity(*pde, 27);
  check_vect_matches_pointwise(*pde, 6, 8, 28);
}

TEST_CASE("zero padding lanes produce finite outputs in chunk form") {
  std::vector<std::unique_ptr<LinearPde>> pdes;
  pdes.push_back(paper_demo_pde());
  pdes.push_back(elastic_pde(2.0, 1.0, 1.0));
  pdes.push_back(ncp_advection_pde({1.0, 0.5, 0.25}, 4));
  for (const auto& pde : pdes) {
    const int m = pde->quantities();
    std::vector<double> chunk(static_cast<std::size_t>(m) * 8, 0.0), out(chunk.size(), 1.0);
    pde->flux_vect(chunk.data(), 0, out.data(), 8, 8);
    pde->ncp_vect(chunk.data(), 0, out.data(), 8, 8);
    for (double v : out) CHECK(std::isfinite(v));
  }
}

TEST_CASE("gaussian source derivatives match finite differences") {
  PointSourceSpec src;
  src.component = 1;
  src.amplitude = 1.5;
  src.center = 0.4;
  src.width = 0.5;
  auto pde = source_only_pde(3, src);
  const double t = 0.3;
  std::vector<double> lo(3), hi(3), d(3);
  // central differences of successive derivative orders
  const double eps = 1e-6;
  for (int order = 0; order < 5; ++order) {
    pde->source_derivative(order + 1, t, 0, d.data());
    pde->source_derivative(order, t - eps, 0, lo.data());
    pde->source_derivative(order, t + eps, 0, hi.data());
    const double fd = (hi[1] - lo[1]) / (2.0 * eps);
    CHECK(d[1] == doctest::Approx(fd).epsilon(1e-7));
    CHECK(d[0] == 0.0);
    CHECK(d[2] == 0.0);
  }
  CHECK(pde->source_position(0) == std::array<double, 3>{0.5, 0.5, 0.5});
}

TEST_CASE("elastic source variant requires a velocity component") {
  PointSourceSpec src;
  src.component = 0;
  CHECK_THROWS(elastic_pde(2.0, 1.0, 1.0, src));
  src.component = 7;
  auto pde = elastic_pde(2.0, 1.0, 1.0, src);
  CHECK(pde->source_count() == 1);
  std::vector<double> amp(9);
  pde->source_derivative(0, src.center, 0, amp.data());
  CHECK(amp[7] == doctest::Approx(src.amplitude));
}
