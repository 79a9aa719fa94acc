#pragma once

// The Lax operator restricted to positive frequencies as a finite Hermitian
// matrix, its resolvent by dense solve or Neumann series, the resolvent gauge
// m(kappa, u), and the generating functional beta with its gradient.

#include <Eigen/Dense>

#include "bolax/field.hpp"

namespace bolax {

struct LaxMatrix {
  int size = 0;
  Eigen::MatrixXcd entries;  // row j, column k represent modes j,k in 1..N
};

struct ResolventMethod {
  enum class Kind { direct, neumann };
  Kind kind = Kind::direct;
  int max_terms = 256;
  double tol = 1e-12;

  static ResolventMethod direct() { return {}; }
  static ResolventMethod neumann(int max_terms, double tol) {
    return {Kind::neumann, max_terms, tol};
  }
};

// 2j on the diagonal plus the Toeplitz part u_hat(j-k); u must cover modes
// up to N-1 and carry the real_valued and zero_mean flags.
LaxMatrix lax_matrix(const Field& u, int N);

// Solves (L + kappa) x = rhs on {1,...,rhs.n_max}.  The direct path is a
// dense LU solve with a residual guard; the Neumann path sums
// R0 sum_j (-1)^j (T_u R0)^j rhs matrix-free and requires the contraction
// condition kappa > C_s ||u||_{rho,s}.
PositiveField resolvent_apply(const Field& u, double kappa,
                              const PositiveField& rhs,
                              const ResolventMethod& method);

// m(kappa, u) = (L + kappa)^{-1} u_+ on u's own lattice.
PositiveField gauge_m(const Field& u, double kappa,
                      const ResolventMethod& method = ResolventMethod::direct());

struct GaugeIdentityResidual {
  double norm_rho1 = 0.0;  // weighted norm of the defect on modes 1..N-1
  double max_abs = 0.0;    // max coefficient modulus of the defect
};

// Defect of dx m + (i/2)(kappa m + C_+(u (m - 1))) on interior modes.
GaugeIdentityResidual gauge_identity_residual(const Field& u, double kappa);

// beta(lambda; u) = <u_+, (L + lambda)^{-1} u_+>; throws if the computed
// inner product has imaginary part above 1e-12.
double beta(const Field& u, double lambda,
            const ResolventMethod& method = ResolventMethod::direct());

// grad beta = m + conj(m) - |m|^2 as an exactly Hermitian-symmetric Field.
Field beta_gradient(const Field& u, double kappa);

// max(100 C_1 ||u||_{rho,1}, 8 N): contraction holds with uniform margin.
double default_kappa(const Field& u);

}  // namespace bolax
