#pragma once

// Truncated Fourier representation of periodic functions together with the
// exponentially weighted Sobolev norms, projections, products, and the two
// classical conserved quantities of the flow.
//
// Conventions: a Field holds coefficients on the symmetric lattice
// {-n_max,...,n_max}; a PositiveField holds {1,...,n_max}.  The inner product
// is the normalized one, <f,g> = sum_n f_n conj(g_n), and the weighted norm is
// ||f||_{rho,s}^2 = sum_{n != 0} <n>^{2s} e^{2 rho |n|} |f_n|^2 with
// <n> = sqrt(1+n^2); the zero mode never contributes to the norm.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bolax {

using cdouble = std::complex<double>;

// Largest exponent allowed inside the weight e^{2 rho n} (and the one-sided
// weights used elsewhere); beyond this we fail loudly instead of overflowing.
inline constexpr double kExponentCap = 600.0;

struct LatticeSpec {
  int n_max = 1;
  double rho = 0.0;
  double s = 1.0;
  bool operator==(const LatticeSpec&) const = default;
};

class Field {
 public:
  Field() = default;
  explicit Field(LatticeSpec sp) : spec(sp), coeffs(2 * sp.n_max + 1) {}

  cdouble& at(int n);
  const cdouble& at(int n) const;
  int n_max() const { return spec.n_max; }

  LatticeSpec spec{1, 0.0, 1.0};
  std::vector<cdouble> coeffs;  // index n + n_max
  bool real_valued = false;
  bool zero_mean = false;
};

class PositiveField {
 public:
  PositiveField() = default;
  explicit PositiveField(LatticeSpec sp) : spec(sp), coeffs(sp.n_max) {}

  cdouble& at(int n);
  const cdouble& at(int n) const;
  int n_max() const { return spec.n_max; }

  LatticeSpec spec{1, 0.0, 1.0};
  std::vector<cdouble> coeffs;  // index n - 1
};

struct ClassicInvariants {
  double momentum = 0.0;
  double energy = 0.0;
};

enum class Sign { plus, minus, zero };

Field make_field(const std::vector<std::pair<int, cdouble>>& modes,
                 LatticeSpec spec, bool symmetrize);

double analytic_norm(const Field& f, double rho, double s);
double analytic_norm(const PositiveField& f, double rho, double s);
inline double analytic_norm(const Field& f) { return analytic_norm(f, f.spec.rho, f.spec.s); }
inline double analytic_norm(const PositiveField& f) { return analytic_norm(f, f.spec.rho, f.spec.s); }

Field project(const Field& f, Sign sign);
PositiveField plus_part(const Field& f);
Field embed(const PositiveField& f);  // positive modes into a symmetric lattice

Field hilbert(const Field& f);
Field derivative(const Field& f);

// Exact convolution; multiply_full keeps the doubled lattice {-2N,...,2N},
// multiply truncates back to the inputs' lattice.  Zero mode retained.
Field multiply_full(const Field& f, const Field& g);
Field multiply(const Field& f, const Field& g);
Field truncated(const Field& f, int n_max);

cdouble inner_l2(const Field& f, const Field& g);
cdouble inner_l2(const PositiveField& f, const PositiveField& g);
double l2_norm(const Field& f);
double l2_norm(const PositiveField& f);

ClassicInvariants classic_invariants(const Field& u);

double algebra_constant(double s);

Field random_analytic_field(std::uint64_t seed, LatticeSpec spec,
                            double amplitude, double decay_margin);

// In-place dst += a * src (same lattice); the workhorse of the integrators.
void add_scaled(Field& dst, double a, const Field& src);
Field operator+(const Field& f, const Field& g);
Field operator-(const Field& f, const Field& g);
Field operator*(double a, const Field& f);

// Enforce Hermitian symmetry by averaging coeffs(n) with conj(coeffs(-n)).
// Throws NumericalError if the pre-correction defect exceeds max_drift.
void symmetrize_checked(Field& f, double max_drift);

// Snapshot serialization; omitted modes are zero, doubles survive a
// round-trip bit-exactly.
std::string field_to_json(const Field& f);
Field field_from_json(const std::string& text);

}  // namespace bolax
