#pragma once

// Shared oracles for the test binaries.  Everything here is computed with
// plain loops, independent of the library's kernel layer, so agreement is a
// genuine cross-check rather than a tautology.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bolax/field.hpp"

namespace helpers {

using bolax::cdouble;
using bolax::Field;

inline double oracle_norm(const Field& f, double rho, double s) {
  double acc = 0.0;
  for (int n = -f.spec.n_max; n <= f.spec.n_max; ++n) {
    if (n == 0) continue;
    const double bracket = 1.0 + double(n) * double(n);
    acc += std::pow(bracket, s) * std::exp(2.0 * rho * std::abs(n)) * std::norm(f.at(n));
  }
  return std::sqrt(acc);
}

inline cdouble eval_at(const Field& f, double x) {
  cdouble acc{};
  for (int n = -f.spec.n_max; n <= f.spec.n_max; ++n)
    acc += f.at(n) * std::exp(cdouble{0.0, double(n) * x});
  return acc;
}

// Mean over [0, 2pi) of a periodic integrand sampled at m equispaced points;
// exact for trigonometric polynomials of degree below m.
template <class Fn>
cdouble periodic_mean(Fn&& fn, int m) {
  cdouble acc{};
  for (int k = 0; k < m; ++k) acc += fn(2.0 * std::numbers::pi * k / m);
  return acc / double(m);
}

inline double hermitian_defect(const Field& f) {
  double worst = 0.0;
  for (int n = 0; n <= f.spec.n_max; ++n)
    worst = std::max(worst, std::abs(f.at(n) - std::conj(f.at(-n))));
  return worst;
}

inline double max_coeff_diff(const Field& a, const Field& b) {
  double worst = 0.0;
  for (int n = -a.spec.n_max; n <= a.spec.n_max; ++n)
    worst = std::max(worst, std::abs(a.at(n) - b.at(n)));
  return worst;
}

// u = 2a cos x on the given lattice.
inline Field cosine_state(double a, bolax::LatticeSpec lat) {
  return bolax::make_field({{1, cdouble{a, 0.0}}}, lat, true);
}

// Eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence bisection.
// Counts eigenvalues below x through the signs of the shifted LDL^T pivots.
inline std::vector<double> sturm_eigenvalues(const std::vector<double>& diag,
                                             const std::vector<double>& off) {
  const int n = static_cast<int>(diag.size());
  auto count_below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      if (q == 0.0) q = 1e-300;
      q = diag[i] - x - off[i - 1] * off[i - 1] / q;
      if (q < 0.0) ++count;
    }
    return count;
  };
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                          (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  std::vector<double> eigs(n);
  for (int k = 0; k < n; ++k) {
    double a = lo, b = hi;
    for (int iter = 0; iter < 200 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++iter) {
      const double mid = 0.5 * (a + b);
      if (count_below(mid) > k)
        b = mid;
      else
        a = mid;
    }
    eigs[k] = 0.5 * (a + b);
  }
  return eigs;
}

}  // namespace helpers
