#pragma once

// The intertwining operator W(tau) solving W' = -Q(tau) W on [0, rho/2],
// where Q(tau) is the Toeplitz matrix of the exponentially weighted
// potential.  W conjugates the free semigroup into the perturbed one,
// e^{-tau L0} W(tau) = e^{-tau L_v}, which holds exactly at finite section,
// so the measured residual isolates integrator and roundoff error.

#include <Eigen/Dense>
#include <vector>

#include "bolax/field.hpp"

namespace bolax {

struct WeightedToeplitz {
  double tau = 0.0;
  Eigen::MatrixXcd entries;  // Q_{jk} = v_hat(j-k) e^{2 tau (j-k)}
};

// Requires 2 tau (N-1) within the exponent cap and v covering modes to N-1.
WeightedToeplitz q_matrix(const Field& v, double tau, int N);

struct IntertwinerSolution {
  std::vector<double> grid;               // 0 = tau_0 < ... < tau_M = rho/2
  std::vector<Eigen::MatrixXcd> w;        // W at each grid point
  std::vector<Eigen::MatrixXcd> w_inv;    // propagated by (W^{-1})' = W^{-1} Q
  std::vector<double> w_norm, w_inv_norm; // spectral norms on the grid
  double self_check = 0.0;  // ||W_end(steps) - W_end(2 steps)||_2
};

// Classical fourth-order integration on a uniform grid; throws if the
// Richardson self-check (doubled step count) moves W(rho/2) by 1e-8 or more,
// or if W W^{-1} drifts from the identity beyond 1e-8 anywhere on the grid.
IntertwinerSolution solve_intertwiner(const Field& v, double rho, int N, int steps);

// ||e^{-(rho/2) L0} W(rho/2) - e^{-(rho/2) L_v}||_2 with the perturbed
// semigroup built from the eigendecomposition, an independent oracle.
double intertwine_residual(const Field& v, double rho, int N, int steps);

struct VectorIdentityCheck {
  double lhs_minus_rhs_norm = 0.0;  // L0 phi vs -Q phi + W L_v psi_v at tau = rho/2
  double energy_route_diff = 0.0;   // sqrt(E) via psi_v vs via the spectral measure
};

VectorIdentityCheck vector_identity_check(const Field& v, double rho, int N,
                                          int steps = 512);

// Composite-Simpson value of the integral of ||Q(tau)||_2 over [0, rho/2].
double integrated_q_norm(const Field& v, double rho, int N, int intervals);

}  // namespace bolax
