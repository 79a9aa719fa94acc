#include "bolax/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bolax/errors.hpp"
#include "bolax/lax.hpp"

namespace bolax {

namespace {
std::string fmt_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}
}  // namespace

SpectralData spectral_data(const Field& u, int N) {
  const LaxMatrix L = lax_matrix(u, N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(L.entries);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectral_data: eigensolver did not converge");
  SpectralData sd;
  sd.eigenvalues = solver.eigenvalues();
  sd.basis = solver.eigenvectors();

  const double scale = std::max(1.0, sd.eigenvalues.cwiseAbs().maxCoeff());
  const double eig_resid =
      (L.entries * sd.basis - sd.basis * sd.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
  if (eig_resid > 1e-10 * scale)
    throw NumericalError("spectral_data: eigen residual " + fmt_sci(eig_resid));
  const double unit_defect =
      (sd.basis.adjoint() * sd.basis - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
  if (unit_defect > 1e-10)
    throw NumericalError("spectral_data: basis not unitary, defect " +
                         fmt_sci(unit_defect));

  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(N);
  for (int n = 1; n <= std::min(N, u.spec.n_max); ++n) up(n - 1) = u.at(n);
  sd.weights = (sd.basis.adjoint() * up).cwiseAbs2();
  const double parseval = std::abs(sd.weights.sum() - up.squaredNorm());
  if (parseval > 1e-10 * std::max(1.0, up.squaredNorm()))
    throw NumericalError("spectral_data: Parseval defect " + fmt_sci(parseval));
  return sd;
}

double beta_via_measure(const SpectralData& sd, double lambda) {
  if (!(lambda > -sd.eigenvalues(0)))
    throw std::invalid_argument("beta_via_measure: lambda at or below -nu_1");
  double acc = 0.0;
  for (int j = 0; j < sd.eigenvalues.size(); ++j)
    acc += sd.weights(j) / (sd.eigenvalues(j) + lambda);
  return acc;
}

double exp_energy_from(const SpectralData& sd, double rho) {
  const double top = rho * sd.eigenvalues.cwiseAbs().maxCoeff();
  if (top > kExponentCap)
    throw std::overflow_error("exp_energy: rho * nu_max exceeds exponent cap");
  double acc = 0.0;
  for (int j = 0; j < sd.eigenvalues.size(); ++j) {
    const double nu = sd.eigenvalues(j);
    acc += sd.weights(j) * std::exp(rho * nu) * (1.0 + 0.25 * nu * nu);
  }
  return acc;
}

double exp_energy(const Field& u, double rho, int N) {
  return exp_energy_from(spectral_data(u, N), rho);
}

namespace {

// Partial sum of sum_{n>K} f(n) via the midpoint integral with the explicit
// antiderivatives available at s = 1; used for the two zeta-type series.
double series_c2_sq(long terms) {
  double acc = 0.0;
  for (long n = 1; n <= terms; ++n) acc += 1.0 / (1.0 + double(n) * double(n));
  const double c = double(terms) + 0.5;
  acc += std::numbers::pi / 2.0 - std::atan(c);
  return 2.0 * acc;
}

double series_4c1_sq(long terms) {
  double acc = 0.0;
  for (long n = 1; n <= terms; ++n) {
    const double n2 = double(n) * double(n);
    acc += 1.0 / (n2 * (1.0 + n2));
  }
  const double c = double(terms) + 0.5;
  acc += 1.0 / c - (std::numbers::pi / 2.0 - std::atan(c));
  return acc;
}

double bisect(double lo, double hi, double f_lo, const auto& f, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GeometricConstants geometric_constants(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("geometric_constants: tol must be > 0");
  const double pi = std::numbers::pi;
  const double pi_coth_pi = pi / std::tanh(pi);

  GeometricConstants gc;
  gc.c2 = std::sqrt(pi_coth_pi - 1.0);
  gc.c1 = 0.5 * std::sqrt(pi * pi / 6.0 - (pi_coth_pi - 1.0) / 2.0);

  gc.c2_series_err = std::abs(gc.c2 * gc.c2 - series_c2_sq(1000000));
  gc.c1_series_err = std::abs(4.0 * gc.c1 * gc.c1 - series_4c1_sq(1000000));
  if (gc.c2_series_err > tol || gc.c1_series_err > tol)
    throw NumericalError("geometric_constants: series/closed-form mismatch beyond tol");

  const auto fprime = [&gc](double x) { return bounding_f_deriv(x, gc); };
  if (!(fprime(0.0) > 0.0 && fprime(1.0) < 0.0))
    throw NumericalError("geometric_constants: root bracket [0,1] invalid");
  gc.x_max = bisect(0.0, 1.0, fprime(0.0), fprime, tol);
  gc.A_max = bounding_f(gc.x_max, gc);
  return gc;
}

const GeometricConstants& default_constants() {
  static const GeometricConstants gc = geometric_constants(1e-10);
  return gc;
}

double bounding_f(double x, const GeometricConstants& gc) {
  const double b = std::sqrt(2.0) / 2.0 * gc.c2;
  return std::exp(-gc.c1 * x) * (x - b * x * x) / std::sqrt(2.0);
}

double bounding_f_deriv(double x, const GeometricConstants& gc) {
  const double b = std::sqrt(2.0) / 2.0 * gc.c2;
  return std::exp(-gc.c1 * x) * ((1.0 - 2.0 * b * x) - gc.c1 * (x - b * x * x)) /
         std::sqrt(2.0);
}

double stable_root(double A, const GeometricConstants& gc) {
  if (!(A >= 0.0) || !(A < gc.A_max))
    throw CheckError("stable_root: A outside [0, A_max), no trapping root");
  if (A == 0.0) return 0.0;
  const auto g = [&](double x) { return bounding_f(x, gc) - A; };
  return bisect(0.0, gc.x_max, g(0.0), g, 1e-12);
}

TranscendentalBounds transcendental_bounds_report(const Field& u, double rho) {
  const GeometricConstants& gc = default_constants();
  TranscendentalBounds tb;
  tb.plus_norm = analytic_norm(plus_part(u), rho, 1.0);
  tb.sqrt_energy = std::sqrt(exp_energy(u, rho, u.spec.n_max));
  const double x = tb.plus_norm;
  const double lower =
      std::exp(-gc.c1 * x) * (x - std::sqrt(2.0) / 2.0 * gc.c2 * x * x) / std::sqrt(2.0);
  const double upper =
      std::exp(gc.c1 * x) * (std::sqrt(2.0) * x + std::sqrt(2.0) / 2.0 * gc.c2 * x * x);
  tb.lower_slack = tb.sqrt_energy - lower;
  tb.upper_slack = upper - tb.sqrt_energy;
  tb.lower_ok = tb.lower_slack >= 0.0;
  tb.upper_ok = tb.upper_slack >= 0.0;
  return tb;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.adjoint() * m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectral_norm: eigensolver did not converge");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

}  // namespace bolax
