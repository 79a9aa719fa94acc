#include "bolax/lax.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "bolax/errors.hpp"
#include "bolax/kernels.hpp"

namespace bolax {

LaxMatrix lax_matrix(const Field& u, int N) {
  if (N < 1) throw std::invalid_argument("lax_matrix: N must be >= 1");
  if (!u.real_valued || !u.zero_mean)
    throw std::invalid_argument("lax_matrix: real_valued and zero_mean flags required");
  if (u.spec.n_max < N - 1)
    throw std::invalid_argument("lax_matrix: lattice too small for requested N");
  LaxMatrix L{N, Eigen::MatrixXcd::Zero(N, N)};
  for (int j = 1; j <= N; ++j) {
    L.entries(j - 1, j - 1) = 2.0 * j;
    for (int k = 1; k < j; ++k) {
      const cdouble v = u.at(j - k);
      L.entries(j - 1, k - 1) = v;
      L.entries(k - 1, j - 1) = std::conj(v);
    }
  }
  return L;
}

namespace {

std::string fmt_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// T_u x = C_+(u * embed(x)) restricted to {1,...,N}, matrix-free.
PositiveField toeplitz_apply(const Field& u, const PositiveField& x) {
  const int N = x.spec.n_max;
  const int M = u.spec.n_max;
  std::vector<cdouble> conv(2 * M + 1 + N - 1);
  kernels::conv_full(conv.data(), u.coeffs.data(), 2 * M + 1, x.coeffs.data(), N);
  // conv index i corresponds to mode (i - 2M) + ... : u index a -> mode a-M,
  // x index b -> mode b+1, so conv[i] is mode i - M + 1.
  PositiveField out(x.spec);
  for (int n = 1; n <= N; ++n) out.at(n) = conv[n + M - 1];
  return out;
}

PositiveField r0_apply(double kappa, const PositiveField& x) {
  PositiveField out(x.spec);
  for (int n = 1; n <= x.spec.n_max; ++n) out.at(n) = x.at(n) / (2.0 * n + kappa);
  return out;
}

PositiveField resolvent_direct(const Field& u, double kappa, const PositiveField& rhs) {
  const int N = rhs.spec.n_max;
  const LaxMatrix L = lax_matrix(u, N);
  Eigen::MatrixXcd A = L.entries;
  A.diagonal().array() += kappa;
  Eigen::Map<const Eigen::VectorXcd> b(rhs.coeffs.data(), N);
  const Eigen::VectorXcd x = A.partialPivLu().solve(b);
  const double resid = (A * x - b).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (!(resid <= 1e-12 * scale))
    throw NumericalError("resolvent_apply: dense solve residual " + fmt_sci(resid) +
                         " (kappa too close to the spectrum?)");
  PositiveField out(rhs.spec);
  for (int n = 1; n <= N; ++n) out.at(n) = x(n - 1);
  return out;
}

PositiveField resolvent_neumann(const Field& u, double kappa, const PositiveField& rhs,
                                const ResolventMethod& method) {
  const double rho = u.spec.rho;
  const double s = u.spec.s;
  const double contraction = algebra_constant(s) * analytic_norm(u, rho, s);
  if (!(kappa > contraction))
    throw NumericalError("resolvent_apply: Neumann contraction violated (kappa <= C_s ||u||)");
  PositiveField term = r0_apply(kappa, rhs);
  PositiveField acc = term;
  for (int j = 1; j <= method.max_terms; ++j) {
    if (analytic_norm(term, rho, s) < method.tol) return acc;
    term = r0_apply(kappa, toeplitz_apply(u, term));
    for (int n = 1; n <= rhs.spec.n_max; ++n) term.at(n) = -term.at(n);
    for (int n = 1; n <= rhs.spec.n_max; ++n) acc.at(n) += term.at(n);
  }
  throw NumericalError("resolvent_apply: Neumann series did not converge in " +
                       std::to_string(method.max_terms) + " terms");
}

}  // namespace

PositiveField resolvent_apply(const Field& u, double kappa, const PositiveField& rhs,
                              const ResolventMethod& method) {
  if (rhs.spec.n_max > u.spec.n_max + 1)
    throw std::invalid_argument("resolvent_apply: rhs lattice exceeds coverage of u");
  if (method.kind == ResolventMethod::Kind::direct) return resolvent_direct(u, kappa, rhs);
  return resolvent_neumann(u, kappa, rhs, method);
}

PositiveField gauge_m(const Field& u, double kappa, const ResolventMethod& method) {
  return resolvent_apply(u, kappa, plus_part(u), method);
}

GaugeIdentityResidual gauge_identity_residual(const Field& u, double kappa) {
  const int N = u.spec.n_max;
  const PositiveField m = gauge_m(u, kappa);
  Field m_minus_one = embed(m);
  m_minus_one.at(0) = -1.0;
  m_minus_one.zero_mean = false;
  const Field prod = multiply(u, m_minus_one);
  Field defect(u.spec);
  for (int n = 1; n <= N - 1; ++n) {
    const cdouble dx = cdouble(0.0, double(n)) * m.at(n);
    defect.at(n) = dx + cdouble(0.0, 0.5) * (kappa * m.at(n) + prod.at(n));
  }
  GaugeIdentityResidual r;
  r.norm_rho1 = analytic_norm(defect, u.spec.rho, 1.0);
  for (int n = 1; n <= N - 1; ++n) r.max_abs = std::max(r.max_abs, std::abs(defect.at(n)));
  return r;
}

double beta(const Field& u, double lambda, const ResolventMethod& method) {
  const PositiveField up = plus_part(u);
  const PositiveField m = resolvent_apply(u, lambda, up, method);
  const cdouble ip = inner_l2(up, m);
  if (std::abs(ip.imag()) > 1e-12)
    throw NumericalError("beta: inner product has imaginary part " + fmt_sci(ip.imag()));
  return ip.real();
}

Field beta_gradient(const Field& u, double kappa) {
  const int N = u.spec.n_max;
  const PositiveField m = gauge_m(u, kappa);
  Field g(u.spec);
  for (int n = 1; n <= N; ++n) {
    g.at(n) = m.at(n);
    g.at(-n) = std::conj(m.at(n));
  }
  // |m|^2 has modes -(N-1)..N-1; build the nonnegative lags and mirror so the
  // output is exactly Hermitian-symmetric.
  for (int q = 0; q <= N - 1; ++q) {
    cdouble lag{};
    for (int k = 1; k + q <= N; ++k) lag += m.at(k + q) * std::conj(m.at(k));
    if (q == 0) {
      g.at(0) -= lag.real();
    } else {
      g.at(q) -= lag;
      g.at(-q) -= std::conj(lag);
    }
  }
  g.real_valued = true;
  g.zero_mean = (g.at(0) == cdouble{});
  return g;
}

double default_kappa(const Field& u) {
  static const double c1 = algebra_constant(1.0);
  return std::max(100.0 * c1 * analytic_norm(u, u.spec.rho, 1.0), 8.0 * u.spec.n_max);
}

}  // namespace bolax
