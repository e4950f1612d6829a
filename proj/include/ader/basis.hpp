#ifndef ADER_BASIS_HPP
#define ADER_BASIS_HPP

#include <array>
#include <utility>
#include <vector>

namespace ader {

// Nodal tensor-product operators on the reference interval [0,1].
// All entries are immutable after construction and safe to share between
// workers. Row-major storage for the matrices, d[k*n + l] = phi_l'(x_k).
struct BasisOperators {
  int n = 0;
  std::vector<double> nodes;       // ascending, inside (0,1)
  std::vector<double> weights;     // positive, sum to 1
  std::vector<double> inv_weights; // 1/weights
  std::vector<double> d;           // n x n discrete derivative operator
  std::vector<double> d_t;         // transpose of d
  std::vector<double> face_left;   // phi_k(0)
  std::vector<double> face_right;  // phi_k(1)
};

// n-point Gauss-Legendre rule mapped to [0,1]; exact for polynomial degree
// <= 2n-1. Nodes via Newton iteration on the Legendre recurrence, converged
// to 1e-15. Rejects n < 1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

// Derivative of the Lagrange basis on the given nodes, evaluated at the
// nodes. Uses barycentric weights with the negative-sum trick for the
// diagonal, so D annihilates constants exactly. Rejects duplicate nodes.
std::vector<double> derivative_operator(const std::vector<double>& nodes);

// Lagrange basis values at the interval ends: (phi_k(0), phi_k(1)).
std::pair<std::vector<double>, std::vector<double>> face_coeffs(const std::vector<double>& nodes);

BasisOperators make_basis(int n);

// phi_k(x) for every k, barycentric form; exact cardinal values when x hits
// a node.
std::vector<double> lagrange_values_at(const std::vector<double>& nodes, double x);

// Mass-weighted projection of a Dirac source at x_s onto the n^3 nodal
// basis: P[(k3*n + k2)*n + k1] = prod_d phi_{k_d}(x_s[d]) / prod_d w_{k_d}.
// Rejects x_s outside [0,1]^3.
std::vector<double> point_source_projection(const BasisOperators& ops,
                                            const std::array<double, 3>& x_s);

}  // namespace ader

#endif
