#include "bolax/intertwine.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "bolax/errors.hpp"
#include "bolax/lax.hpp"
#include "bolax/spectral.hpp"

namespace bolax {

namespace {
std::string fmt_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}
}  // namespace

WeightedToeplitz q_matrix(const Field& v, double tau, int N) {
  if (tau < 0.0) throw std::invalid_argument("q_matrix: tau must be >= 0");
  if (2.0 * tau * (N - 1) > kExponentCap)
    throw std::overflow_error("q_matrix: 2*tau*(N-1) exceeds exponent cap");
  if (v.spec.n_max < N - 1)
    throw std::invalid_argument("q_matrix: lattice too small for requested N");
  WeightedToeplitz q{tau, Eigen::MatrixXcd::Zero(N, N)};
  std::vector<cdouble> band(2 * N - 1);  // index d + (N-1), d = j - k
  for (int d = -(N - 1); d <= N - 1; ++d)
    band[d + N - 1] = (d == 0) ? cdouble{} : v.at(d) * std::exp(2.0 * tau * d);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) q.entries(j, k) = band[j - k + N - 1];
  return q;
}

namespace {

// One classical fourth-order step for W' = -Q W and, optionally,
// Z' = Z Q with Z tracking W^{-1}.
void rk4_step(const Field& v, int N, double tau, double h, Eigen::MatrixXcd& w,
              Eigen::MatrixXcd* z) {
  const Eigen::MatrixXcd q0 = q_matrix(v, tau, N).entries;
  const Eigen::MatrixXcd qh = q_matrix(v, tau + 0.5 * h, N).entries;
  const Eigen::MatrixXcd q1 = q_matrix(v, tau + h, N).entries;

  const Eigen::MatrixXcd k1 = -q0 * w;
  const Eigen::MatrixXcd k2 = -qh * (w + 0.5 * h * k1);
  const Eigen::MatrixXcd k3 = -qh * (w + 0.5 * h * k2);
  const Eigen::MatrixXcd k4 = -q1 * (w + h * k3);
  w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  if (z) {
    const Eigen::MatrixXcd j1 = (*z) * q0;
    const Eigen::MatrixXcd j2 = ((*z) + 0.5 * h * j1) * qh;
    const Eigen::MatrixXcd j3 = ((*z) + 0.5 * h * j2) * qh;
    const Eigen::MatrixXcd j4 = ((*z) + h * j3) * q1;
    *z += (h / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
  }
}

Eigen::MatrixXcd integrate_w_only(const Field& v, double rho, int N, int steps) {
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(N, N);
  const double h = 0.5 * rho / steps;
  for (int i = 0; i < steps; ++i) rk4_step(v, N, i * h, h, w, nullptr);
  return w;
}

}  // namespace

IntertwinerSolution solve_intertwiner(const Field& v, double rho, int N, int steps) {
  if (steps < 16) throw std::invalid_argument("solve_intertwiner: steps must be >= 16");
  if (!(rho > 0.0)) throw std::invalid_argument("solve_intertwiner: rho must be > 0");

  IntertwinerSolution sol;
  sol.grid.reserve(steps + 1);
  sol.w.reserve(steps + 1);
  sol.w_inv.reserve(steps + 1);
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(N, N);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(N, N);
  const double h = 0.5 * rho / steps;

  const auto push = [&](double tau) {
    sol.grid.push_back(tau);
    sol.w.push_back(w);
    sol.w_inv.push_back(z);
    sol.w_norm.push_back(spectral_norm(w));
    sol.w_inv_norm.push_back(spectral_norm(z));
    const double defect = spectral_norm(w * z - eye);
    if (defect > 1e-8)
      throw NumericalError("solve_intertwiner: W * W^{-1} defect " + fmt_sci(defect));
  };

  push(0.0);
  for (int i = 0; i < steps; ++i) {
    rk4_step(v, N, i * h, h, w, &z);
    push((i + 1) * h);
  }

  sol.self_check = spectral_norm(w - integrate_w_only(v, rho, N, 2 * steps));
  if (sol.self_check >= 1e-8)
    throw NumericalError("solve_intertwiner: Richardson self-check " +
                         fmt_sci(sol.self_check) + " (step count too small)");
  return sol;
}

double intertwine_residual(const Field& v, double rho, int N, int steps) {
  const IntertwinerSolution sol = solve_intertwiner(v, rho, N, steps);
  const double tau = 0.5 * rho;

  Eigen::VectorXd free_decay(N);
  for (int n = 1; n <= N; ++n) free_decay(n - 1) = std::exp(-tau * 2.0 * n);
  const Eigen::MatrixXcd lhs = free_decay.asDiagonal() * sol.w.back();

  const SpectralData sd = spectral_data(v, N);
  const Eigen::VectorXd decay = (-tau * sd.eigenvalues.array()).exp();
  const Eigen::MatrixXcd rhs =
      sd.basis * decay.asDiagonal() * sd.basis.adjoint();
  return spectral_norm(lhs - rhs);
}

VectorIdentityCheck vector_identity_check(const Field& v, double rho, int N, int steps) {
  const IntertwinerSolution sol = solve_intertwiner(v, rho, N, steps);
  const double tau = 0.5 * rho;

  Eigen::VectorXcd phi(N);
  for (int n = 1; n <= N; ++n)
    phi(n - 1) = (n <= v.spec.n_max ? v.at(n) : cdouble{}) * std::exp(tau * 2.0 * n);
  const Eigen::MatrixXcd lax = lax_matrix(v, N).entries;
  const Eigen::VectorXcd psi_v = sol.w_inv.back() * phi;

  Eigen::VectorXcd lhs(N);
  for (int n = 1; n <= N; ++n) lhs(n - 1) = 2.0 * n * phi(n - 1);
  const Eigen::VectorXcd rhs =
      -(q_matrix(v, tau, N).entries * phi) + sol.w.back() * (lax * psi_v);

  VectorIdentityCheck out;
  out.lhs_minus_rhs_norm = (lhs - rhs).head(N - 1).norm();

  const Eigen::VectorXcd half_l_psi = 0.5 * (lax * psi_v);
  const double via_psi = std::sqrt(psi_v.squaredNorm() + half_l_psi.squaredNorm());
  out.energy_route_diff = std::abs(via_psi - std::sqrt(exp_energy(v, rho, N)));
  return out;
}

double integrated_q_norm(const Field& v, double rho, int N, int intervals) {
  if (intervals < 2 || intervals % 2 != 0)
    throw std::invalid_argument("integrated_q_norm: intervals must be even and >= 2");
  const double h = 0.5 * rho / intervals;
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += weight * spectral_norm(q_matrix(v, i * h, N).entries);
  }
  return acc * h / 3.0;
}

}  // namespace bolax
