#include "ader/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace ader {

namespace {

// Legendre P_n and P_n' on [-1,1] via the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: node count must be >= 1");
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, then Newton to 1e-15
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(n, x);
      dp = d;
      double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, d] = legendre(n, x);
    (void)p;
    dp = d;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]; the cosine guess walks from the right end down
    nodes[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 0.5 * w;
  }
  if (n == 1) {
    nodes[0] = 0.5;
    weights[0] = 1.0;
  }
  return {nodes, weights};
}

namespace {

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> lam(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      double diff = nodes[j] - nodes[i];
      if (diff == 0.0) throw std::invalid_argument("derivative_operator: duplicate nodes");
      lam[j] /= diff;
    }
  }
  return lam;
}

}  // namespace

std::vector<double> derivative_operator(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  if (n < 1) throw std::invalid_argument("derivative_operator: empty node set");
  auto lam = barycentric_weights(nodes);
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      d[k * n + j] = (lam[j] / lam[k]) / (nodes[k] - nodes[j]);
      diag -= d[k * n + j];
    }
    d[k * n + k] = diag;  // rows sum to zero: exact derivative of constants
  }
  return d;
}

std::vector<double> lagrange_values_at(const std::vector<double>& nodes, double x) {
  const int n = static_cast<int>(nodes.size());
  auto lam = barycentric_weights(nodes);
  std::vector<double> vals(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (x == nodes[j]) {
      vals[j] = 1.0;
      return vals;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) denom += lam[j] / (x - nodes[j]);
  for (int j = 0; j < n; ++j) vals[j] = (lam[j] / (x - nodes[j])) / denom;
  return vals;
}

std::pair<std::vector<double>, std::vector<double>> face_coeffs(const std::vector<double>& nodes) {
  return {lagrange_values_at(nodes, 0.0), lagrange_values_at(nodes, 1.0)};
}

BasisOperators make_basis(int n) {
  BasisOperators ops;
  ops.n = n;
  std::tie(ops.nodes, ops.weights) = gauss_legendre(n);
  ops.inv_weights.resize(n);
  for (int i = 0; i < n; ++i) ops.inv_weights[i] = 1.0 / ops.weights[i];
  ops.d = derivative_operator(ops.nodes);
  ops.d_t.resize(ops.d.size());
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) ops.d_t[l * n + k] = ops.d[k * n + l];
  std::tie(ops.face_left, ops.face_right) = face_coeffs(ops.nodes);
  return ops;
}

std::vector<double> point_source_projection(const BasisOperators& ops,
                                            const std::array<double, 3>& x_s) {
  for (double c : x_s) {
    if (!(c >= 0.0 && c <= 1.0))
      throw std::invalid_argument("point_source_projection: position outside the reference cube");
  }
  const int n = ops.n;
  std::array<std::vector<double>, 3> phi;
  for (int dim = 0; dim < 3; ++dim) phi[dim] = lagrange_values_at(ops.nodes, x_s[dim]);
  std::vector<double> p(static_cast<std::size_t>(n) * n * n);
  for (int k3 = 0; k3 < n; ++k3)
    for (int k2 = 0; k2 < n; ++k2)
      for (int k1 = 0; k1 < n; ++k1) {
        double num = phi[0][k1] * phi[1][k2] * phi[2][k3];
        double mass = ops.weights[k1] * ops.weights[k2] * ops.weights[k3];
        p[(k3 * n + k2) * n + k1] = num / mass;
      }
  return p;
}

}  // namespace ader
