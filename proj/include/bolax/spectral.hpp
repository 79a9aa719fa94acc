#pragma once

// Eigendecomposition of the Lax matrix, the invariant spectral measure, the
// exponentially weighted spectral energy, and the geometric constants and
// bounding function that define the trapping region.

#include <Eigen/Dense>

#include "bolax/field.hpp"

namespace bolax {

struct SpectralData {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXcd basis;       // orthonormal eigenvectors in columns
  Eigen::VectorXd weights;      // |<phi_j, u_+>|^2
};

// Decomposes lax_matrix(u, N); verifies the eigen residual, basis unitarity,
// and the Parseval identity sum w_j = ||u_+||^2 to 1e-10.
SpectralData spectral_data(const Field& u, int N);

// sum_j w_j / (nu_j + lambda); agrees with the resolvent route for beta.
double beta_via_measure(const SpectralData& sd, double lambda);

// sum_j w_j e^{rho nu_j} (1 + nu_j^2 / 4).
double exp_energy(const Field& u, double rho, int N);
double exp_energy_from(const SpectralData& sd, double rho);

struct GeometricConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double x_max = 0.0;
  double A_max = 0.0;
  double c1_series_err = 0.0;  // |4 c1^2 - partial series + tail|
  double c2_series_err = 0.0;  // |c2^2 - partial series + tail|
};

// Closed forms cross-checked against direct partial sums; x_max is the
// smaller positive root of f'(x) = 0 by bisection, A_max = f(x_max).
GeometricConstants geometric_constants(double tol);
const GeometricConstants& default_constants();

// f(x) = (1/sqrt(2)) e^{-c1 x} (x - (sqrt(2)/2) c2 x^2)
double bounding_f(double x, const GeometricConstants& gc);
double bounding_f_deriv(double x, const GeometricConstants& gc);

// Unique root of f(X) = A in [0, x_max], bisection to 1e-12.
double stable_root(double A, const GeometricConstants& gc);

struct TranscendentalBounds {
  bool lower_ok = false;
  bool upper_ok = false;
  double lower_slack = 0.0;  // sqrt(E) - lower bound
  double upper_slack = 0.0;  // upper bound - sqrt(E)
  double sqrt_energy = 0.0;
  double plus_norm = 0.0;  // ||u_+||_{rho,1}
};

// Both inequalities relating sqrt(E) to ||u_+||_{rho,1}.
TranscendentalBounds transcendental_bounds_report(const Field& u, double rho);

// Operator 2-norm of a general complex matrix.
double spectral_norm(const Eigen::MatrixXcd& m);

}  // namespace bolax
