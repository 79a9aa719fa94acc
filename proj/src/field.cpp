#include "bolax/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "bolax/errors.hpp"
#include "bolax/kernels.hpp"

namespace bolax {

namespace {

void require_same_lattice(int a, int b, const char* who) {
  if (a != b) throw std::invalid_argument(std::string(who) + ": lattice mismatch");
}

std::string fmt_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double japanese_bracket_sq(int n) { return 1.0 + double(n) * double(n); }

}  // namespace

cdouble& Field::at(int n) {
  if (n < -spec.n_max || n > spec.n_max)
    throw std::out_of_range("Field::at: mode outside lattice");
  return coeffs[n + spec.n_max];
}

const cdouble& Field::at(int n) const {
  if (n < -spec.n_max || n > spec.n_max)
    throw std::out_of_range("Field::at: mode outside lattice");
  return coeffs[n + spec.n_max];
}

cdouble& PositiveField::at(int n) {
  if (n < 1 || n > spec.n_max)
    throw std::out_of_range("PositiveField::at: mode outside {1,...,N}");
  return coeffs[n - 1];
}

const cdouble& PositiveField::at(int n) const {
  if (n < 1 || n > spec.n_max)
    throw std::out_of_range("PositiveField::at: mode outside {1,...,N}");
  return coeffs[n - 1];
}

Field make_field(const std::vector<std::pair<int, cdouble>>& modes,
                 LatticeSpec spec, bool symmetrize) {
  Field f(spec);
  std::set<int> seen;
  for (const auto& [n, value] : modes) {
    if (std::abs(n) > spec.n_max)
      throw std::out_of_range("make_field: mode index outside lattice");
    if (symmetrize && n <= 0)
      throw std::invalid_argument("make_field: symmetrize expects only n > 0 entries");
    if (!seen.insert(n).second)
      throw std::invalid_argument("make_field: duplicate mode index");
    f.at(n) = value;
    if (symmetrize) f.at(-n) = std::conj(value);
  }
  if (symmetrize) {
    f.real_valued = true;
  } else {
    f.real_valued = true;
    for (int n = 0; n <= spec.n_max && f.real_valued; ++n)
      if (f.at(-n) != std::conj(f.at(n))) f.real_valued = false;
  }
  f.zero_mean = (f.at(0) == cdouble{});
  return f;
}

namespace {

double norm_impl(const cdouble* coeffs, int lo, int n_max, double rho, double s) {
  if (rho < 0.0) throw std::invalid_argument("analytic_norm: rho must be >= 0");
  if (2.0 * rho * n_max > kExponentCap)
    throw std::overflow_error("analytic_norm: 2*rho*n_max exceeds exponent cap");
  std::vector<double> w;
  std::vector<cdouble> c;
  w.reserve(2 * n_max + 1);
  c.reserve(2 * n_max + 1);
  for (int n = lo; n <= n_max; ++n) {
    if (n == 0) continue;
    w.push_back(std::pow(japanese_bracket_sq(n), s) * std::exp(2.0 * rho * std::abs(n)));
    c.push_back(coeffs[n - lo]);
  }
  return std::sqrt(kernels::weighted_abs2(w.data(), c.data(), c.size()));
}

}  // namespace

double analytic_norm(const Field& f, double rho, double s) {
  return norm_impl(f.coeffs.data(), -f.spec.n_max, f.spec.n_max, rho, s);
}

double analytic_norm(const PositiveField& f, double rho, double s) {
  return norm_impl(f.coeffs.data(), 1, f.spec.n_max, rho, s);
}

Field project(const Field& f, Sign sign) {
  Field out(f.spec);
  const int N = f.spec.n_max;
  switch (sign) {
    case Sign::plus:
      for (int n = 1; n <= N; ++n) out.at(n) = f.at(n);
      break;
    case Sign::minus:
      for (int n = -N; n <= -1; ++n) out.at(n) = f.at(n);
      break;
    case Sign::zero:
      out.at(0) = f.at(0);
      break;
  }
  out.zero_mean = (out.at(0) == cdouble{});
  out.real_valued = (sign == Sign::zero) && (f.at(0).imag() == 0.0);
  return out;
}

PositiveField plus_part(const Field& f) {
  PositiveField out(f.spec);
  for (int n = 1; n <= f.spec.n_max; ++n) out.at(n) = f.at(n);
  return out;
}

Field embed(const PositiveField& f) {
  Field out(f.spec);
  for (int n = 1; n <= f.spec.n_max; ++n) out.at(n) = f.at(n);
  out.zero_mean = true;
  return out;
}

Field hilbert(const Field& f) {
  Field out(f.spec);
  for (int n = 1; n <= f.spec.n_max; ++n) {
    out.at(n) = cdouble(0.0, -1.0) * f.at(n);
    out.at(-n) = cdouble(0.0, 1.0) * f.at(-n);
  }
  out.real_valued = f.real_valued;
  out.zero_mean = true;
  return out;
}

Field derivative(const Field& f) {
  Field out(f.spec);
  for (int n = -f.spec.n_max; n <= f.spec.n_max; ++n)
    out.at(n) = cdouble(0.0, double(n)) * f.at(n);
  out.real_valued = f.real_valued;
  out.zero_mean = true;
  return out;
}

Field multiply_full(const Field& f, const Field& g) {
  require_same_lattice(f.spec.n_max, g.spec.n_max, "multiply");
  const int N = f.spec.n_max;
  Field out(LatticeSpec{2 * N, f.spec.rho, f.spec.s});
  kernels::conv_full(out.coeffs.data(), f.coeffs.data(), 2 * N + 1,
                     g.coeffs.data(), 2 * N + 1);
  if (f.real_valued && g.real_valued) {
    for (int n = 1; n <= 2 * N; ++n) {
      const cdouble avg = 0.5 * (out.at(n) + std::conj(out.at(-n)));
      out.at(n) = avg;
      out.at(-n) = std::conj(avg);
    }
    out.at(0) = out.at(0).real();
    out.real_valued = true;
  }
  out.zero_mean = (out.at(0) == cdouble{});
  return out;
}

Field multiply(const Field& f, const Field& g) {
  return truncated(multiply_full(f, g), f.spec.n_max);
}

Field truncated(const Field& f, int n_max) {
  if (n_max > f.spec.n_max)
    throw std::invalid_argument("truncated: target lattice larger than source");
  Field out(LatticeSpec{n_max, f.spec.rho, f.spec.s});
  for (int n = -n_max; n <= n_max; ++n) out.at(n) = f.at(n);
  out.real_valued = f.real_valued;
  out.zero_mean = (out.at(0) == cdouble{});
  return out;
}

cdouble inner_l2(const Field& f, const Field& g) {
  require_same_lattice(f.spec.n_max, g.spec.n_max, "inner_l2");
  cdouble acc{};
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    acc += f.coeffs[i] * std::conj(g.coeffs[i]);
  return acc;
}

cdouble inner_l2(const PositiveField& f, const PositiveField& g) {
  require_same_lattice(f.spec.n_max, g.spec.n_max, "inner_l2");
  cdouble acc{};
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    acc += f.coeffs[i] * std::conj(g.coeffs[i]);
  return acc;
}

double l2_norm(const Field& f) {
  std::vector<double> w(f.coeffs.size(), 1.0);
  return std::sqrt(kernels::weighted_abs2(w.data(), f.coeffs.data(), f.coeffs.size()));
}

double l2_norm(const PositiveField& f) {
  std::vector<double> w(f.coeffs.size(), 1.0);
  return std::sqrt(kernels::weighted_abs2(w.data(), f.coeffs.data(), f.coeffs.size()));
}

ClassicInvariants classic_invariants(const Field& u) {
  if (!u.real_valued || !u.zero_mean)
    throw std::invalid_argument("classic_invariants: real_valued and zero_mean flags required");
  ClassicInvariants inv;
  double quad = 0.0;
  for (int n = -u.spec.n_max; n <= u.spec.n_max; ++n) {
    const double a2 = std::norm(u.at(n));
    inv.momentum += 0.5 * a2;
    quad += 0.5 * std::abs(double(n)) * a2;
  }
  const Field sq = multiply_full(u, u);
  cdouble cubic{};
  for (int n = -u.spec.n_max; n <= u.spec.n_max; ++n) cubic += u.at(n) * sq.at(-n);
  inv.energy = quad + cubic.real() / 6.0;
  return inv;
}

namespace {

// Integral of (1+x^2)^{-s} over [c, inf), expanded in powers of c^{-2}; the
// series alternates with decreasing terms for c > sqrt(s), so truncation is
// bounded by the first omitted term.
double envelope_tail_integral(double c, double s) {
  double binom = 1.0;  // Gamma(s+j) / (Gamma(s) j!)
  double value = 0.0;
  double sign = 1.0;
  for (int j = 0; j < 40; ++j) {
    const double term = binom * std::pow(c, 1.0 - 2.0 * s - 2.0 * j) / (2.0 * s + 2.0 * j - 1.0);
    value += sign * term;
    if (term < 1e-18 * std::max(value, 1e-300)) break;
    binom *= (s + j) / (j + 1.0);
    sign = -sign;
  }
  return value;
}

}  // namespace

double algebra_constant(double s) {
  if (s <= 0.5) throw std::domain_error("algebra_constant: series diverges for s <= 1/2");
  double partial = 0.0;
  long k = 0;
  while (true) {
    ++k;
    partial += std::pow(1.0 + double(k) * double(k), -s);
    if (k >= 8) {
      // Midpoint-rule tail: error <= |f'(k+1/2)|/24 for the convex tail.
      const double c = double(k) + 0.5;
      const double fprime = 2.0 * s * c * std::pow(1.0 + c * c, -s - 1.0);
      if (fprime / 24.0 < 1e-12) break;
    }
    if (k > 100000000L)
      throw NumericalError("algebra_constant: series did not reach tolerance");
  }
  const double c = double(k) + 0.5;
  const double sum = 1.0 + 2.0 * (partial + envelope_tail_integral(c, s));
  return std::pow(2.0, s + 1.0) * std::sqrt(sum);
}

Field random_analytic_field(std::uint64_t seed, LatticeSpec spec,
                            double amplitude, double decay_margin) {
  if (amplitude <= 0.0 || decay_margin <= 0.0)
    throw std::invalid_argument("random_analytic_field: amplitude and decay_margin must be > 0");
  std::mt19937_64 rng(seed);
  const auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };  // [0,1)
  Field f(spec);
  for (int n = 1; n <= spec.n_max; ++n) {
    const double envelope =
        amplitude * std::exp(-(spec.rho + decay_margin) * n) / japanese_bracket_sq(n);
    const double r = 0.25 + 0.75 * unit();
    const double phase = 2.0 * std::numbers::pi * unit();
    f.at(n) = envelope * r * cdouble(std::cos(phase), std::sin(phase));
    f.at(-n) = std::conj(f.at(n));
  }
  f.real_valued = true;
  f.zero_mean = true;
  return f;
}

void add_scaled(Field& dst, double a, const Field& src) {
  require_same_lattice(dst.spec.n_max, src.spec.n_max, "add_scaled");
  kernels::axpy(reinterpret_cast<double*>(dst.coeffs.data()), a,
                reinterpret_cast<const double*>(src.coeffs.data()),
                2 * dst.coeffs.size());
  dst.real_valued = dst.real_valued && src.real_valued;
  dst.zero_mean = dst.zero_mean && src.zero_mean;
}

Field operator+(const Field& f, const Field& g) {
  Field out = f;
  add_scaled(out, 1.0, g);
  return out;
}

Field operator-(const Field& f, const Field& g) {
  Field out = f;
  add_scaled(out, -1.0, g);
  return out;
}

Field operator*(double a, const Field& f) {
  Field out(f.spec);
  add_scaled(out, a, f);
  out.real_valued = f.real_valued;
  out.zero_mean = f.zero_mean;
  return out;
}

void symmetrize_checked(Field& f, double max_drift) {
  double drift = std::abs(f.at(0).imag());
  for (int n = 1; n <= f.spec.n_max; ++n)
    drift = std::max(drift, std::abs(f.at(-n) - std::conj(f.at(n))));
  if (drift > max_drift)
    throw NumericalError("symmetrize_checked: Hermitian symmetry drift " + fmt_sci(drift) +
                         " exceeds " + fmt_sci(max_drift));
  for (int n = 1; n <= f.spec.n_max; ++n) {
    const cdouble avg = 0.5 * (f.at(n) + std::conj(f.at(-n)));
    f.at(n) = avg;
    f.at(-n) = std::conj(avg);
  }
  f.at(0) = f.at(0).real();
  f.real_valued = true;
  f.zero_mean = (f.at(0) == cdouble{});
}

std::string field_to_json(const Field& f) {
  nlohmann::json j;
  j["n_max"] = f.spec.n_max;
  j["rho"] = f.spec.rho;
  j["s"] = f.spec.s;
  j["real_valued"] = f.real_valued;
  j["zero_mean"] = f.zero_mean;
  j["coeffs"] = nlohmann::json::array();
  for (int n = -f.spec.n_max; n <= f.spec.n_max; ++n) {
    if (f.at(n) == cdouble{}) continue;
    j["coeffs"].push_back({{"n", n}, {"re", f.at(n).real()}, {"im", f.at(n).imag()}});
  }
  return j.dump(2);
}

Field field_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("field snapshot: ") + e.what());
  }
  static const std::set<std::string> known{"n_max", "rho", "s", "real_valued",
                                           "zero_mean", "coeffs"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("field snapshot: unknown key \"" + key + "\"");
  LatticeSpec spec{j.at("n_max").get<int>(), j.at("rho").get<double>(),
                   j.at("s").get<double>()};
  if (spec.n_max < 1) throw ConfigError("field snapshot: n_max must be >= 1");
  if (spec.rho < 0.0) throw ConfigError("field snapshot: rho must be >= 0");
  Field f(spec);
  std::set<int> seen;
  for (const auto& entry : j.at("coeffs")) {
    for (const auto& [key, _] : entry.items())
      if (key != "n" && key != "re" && key != "im")
        throw ConfigError("field snapshot: unknown key \"" + key + "\" in coeffs");
    const int n = entry.at("n").get<int>();
    if (std::abs(n) > spec.n_max) throw ConfigError("field snapshot: mode outside lattice");
    if (!seen.insert(n).second) throw ConfigError("field snapshot: duplicate mode");
    f.at(n) = cdouble(entry.at("re").get<double>(), entry.at("im").get<double>());
  }
  f.real_valued = j.at("real_valued").get<bool>();
  f.zero_mean = j.at("zero_mean").get<bool>();
  if (f.zero_mean && f.at(0) != cdouble{})
    throw ConfigError("field snapshot: zero_mean set but mode 0 nonzero");
  if (f.real_valued)
    for (int n = 0; n <= spec.n_max; ++n)
      if (f.at(-n) != std::conj(f.at(n)))
        throw ConfigError("field snapshot: real_valued set but coefficients not Hermitian");
  return f;
}

}  // namespace bolax
