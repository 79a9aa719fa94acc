#include "bolax/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "bolax/errors.hpp"
#include "bolax/flow.hpp"
#include "bolax/intertwine.hpp"
#include "bolax/lax.hpp"
#include "bolax/spectral.hpp"

namespace bolax {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

double hermitian_defect(const Field& f) {
  double worst = 0.0;
  for (int n = 0; n <= f.spec.n_max; ++n)
    worst = std::max(worst, std::abs(f.at(n) - std::conj(f.at(-n))));
  return worst;
}

double max_coeff_diff(const Field& a, const Field& b) {
  double worst = 0.0;
  for (int n = -a.spec.n_max; n <= a.spec.n_max; ++n)
    worst = std::max(worst, std::abs(a.at(n) - b.at(n)));
  return worst;
}

double max_coeff_diff(const PositiveField& a, const PositiveField& b) {
  double worst = 0.0;
  for (int n = 1; n <= a.spec.n_max; ++n)
    worst = std::max(worst, std::abs(a.at(n) - b.at(n)));
  return worst;
}

cdouble eval_at(const Field& f, double x) {
  cdouble acc{};
  for (int n = -f.spec.n_max; n <= f.spec.n_max; ++n)
    acc += f.at(n) * std::exp(cdouble{0.0, double(n) * x});
  return acc;
}

}  // namespace

std::vector<CheckResult> run_verification_suite(const ExperimentConfig& cfg) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double measured, double bound, std::string detail) {
    CheckResult r;
    r.name = std::move(name);
    r.pass = measured <= bound;
    r.measured = measured;
    r.bound = bound;
    r.detail = std::move(detail);
    out.push_back(std::move(r));
  };

  const double rho = cfg.lattice.rho > 0.0 ? cfg.lattice.rho : 0.5;
  const double s = cfg.lattice.s;
  const LatticeSpec lat{std::min(cfg.lattice.n_max, 32), rho, s};
  const std::uint64_t seed0 = cfg.initial.seed;
  const double cs = algebra_constant(s);
  auto state = [&](std::uint64_t k, double amplitude) {
    return random_analytic_field(seed0 * 1000 + k, lat, amplitude, 0.25);
  };

  {
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
      const Field u = state(10 + j, 0.1);
      const Field v = state(20 + j, 0.1);
      worst = std::max({worst, hermitian_defect(multiply(u, v)), hermitian_defect(derivative(u)),
                        hermitian_defect(hilbert(u)),
                        hermitian_defect(vector_field(u, FlowKind::bo())),
                        hermitian_defect(beta_gradient(u, default_kappa(u)))});
    }
    add("hermitian_symmetry", worst, 0.0,
        "coefficient mirror defect across multiply/derivative/hilbert/flows, 5 states");
  }

  {
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
      const Field u = state(30 + j, 0.3);
      const Field p = project(u, Sign::plus);
      const Field m = project(u, Sign::minus);
      const Field z = project(u, Sign::zero);
      worst = std::max(worst, max_coeff_diff(p + m + z, u));
      worst = std::max(worst, max_coeff_diff(project(p, Sign::plus), p));
      const Field h2 = hilbert(hilbert(u));
      worst = std::max(worst, max_coeff_diff(h2, -1.0 * (p + m)));
    }
    add("projection_algebra", worst, 0.0,
        "partition of unity, idempotence, and hilbert^2 = -(P+ + P-)");
  }

  {
    double worst = 0.0;
    const int m_grid = 4 * lat.n_max + 9;
    for (int j = 0; j < 5; ++j) {
      const Field u = state(40 + j, 0.3);
      const Field v = state(50 + j, 0.3);
      cdouble quad{};
      for (int k = 0; k < m_grid; ++k) {
        const double x = 2.0 * std::numbers::pi * k / m_grid;
        quad += eval_at(u, x) * std::conj(eval_at(v, x));
      }
      quad /= double(m_grid);
      worst = std::max(worst, std::abs(quad - inner_l2(u, v)));
    }
    add("plancherel_quadrature", worst, cfg.tol.quadrature,
        "normalized inner product vs periodic trapezoid quadrature");
  }

  {
    double worst = 0.0;
    for (int j = 0; j < 40; ++j) {
      const Field u = state(100 + j, 0.3);
      const Field v = state(200 + j, 0.3);
      const double lhs = analytic_norm(multiply_full(u, v), rho, s);
      worst = std::max(worst, lhs / (cs * analytic_norm(u, rho, s) * analytic_norm(v, rho, s)));
    }
    add("algebra_bound", worst, 1.0,
        "||uv|| <= C_s ||u|| ||v|| on the doubled lattice, 40 pairs, C_s = " + fmt(cs));
  }

  {
    const double eps = rho / 6.0;
    double worst = 0.0;
    for (int j = 0; j < 40; ++j) {
      const Field u = state(300 + j, 0.3);
      const double lhs = analytic_norm(derivative(u), rho - eps, s);
      worst = std::max(worst, lhs * eps * std::numbers::e / analytic_norm(u, rho, s));
    }
    add("cauchy_estimate", worst, 1.0,
        "||dx u||_{rho-eps} <= (eps e)^{-1} ||u||_rho at eps = rho/6, 40 states");
  }

  const GeometricConstants gc = default_constants();
  add("constants_series", std::max(gc.c1_series_err, gc.c2_series_err), cfg.tol.series,
      "closed forms vs 1e6-term partial sums with integral tail");

  {
    double worst = 0.0;
    std::mt19937_64 rng(seed0 + 7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int j = 0; j < 10; ++j) {
      const Field u = state(400 + j, 0.1);
      const PositiveField rhs = plus_part(state(450 + j, 0.3));
      const double kappa = (2.2 + 0.6 * unif(rng)) * cs * analytic_norm(u, rho, s);
      const PositiveField xd = resolvent_apply(u, kappa, rhs, ResolventMethod::direct());
      const PositiveField xn = resolvent_apply(u, kappa, rhs, ResolventMethod::neumann(512, 1e-13));
      worst = std::max(worst, max_coeff_diff(xd, xn));
    }
    add("resolvent_equivalence", worst, cfg.tol.resolvent,
        "dense solve vs Neumann series at kappa > 2 C_s ||u||, 10 systems");
  }

  {
    Field zero(lat);
    zero.real_valued = true;
    zero.zero_mean = true;
    std::mt19937_64 rng(seed0 + 8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
      const PositiveField g = plus_part(state(500 + j, 0.3));
      const double kappa = 1.0 + 99.0 * unif(rng);
      const PositiveField x = resolvent_apply(zero, kappa, g, ResolventMethod::direct());
      worst = std::max(worst, analytic_norm(x, rho, s) * kappa / analytic_norm(g, rho, s));
    }
    add("resolvent_multiplier_bound", worst, 1.0,
        "free resolvent gain ||R0 g|| kappa / ||g|| on 100 random g");
  }

  {
    std::mt19937_64 rng(seed0 + 9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int j = 0; j < 25; ++j) {
      const Field u = state(600 + j, 0.1);
      const PositiveField rhs = plus_part(state(650 + j, 0.3));
      const double norm_u = analytic_norm(u, rho, s);
      const double kappa = (2.0 + unif(rng)) * cs * norm_u;
      const PositiveField x = resolvent_apply(u, kappa, rhs, ResolventMethod::direct());
      worst = std::max(worst, analytic_norm(x, rho, s) * (kappa - cs * norm_u) /
                                  analytic_norm(rhs, rho, s));
    }
    add("resolvent_norm_bound", worst, 1.0,
        "||x|| (kappa - C_s ||u||) <= ||rhs||, 25 admissible systems");
  }

  {
    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
      const Field u = state(700 + j, 0.1);
      const double kappa = default_kappa(u);
      PositiveField f = plus_part(state(750 + j, 0.3));
      PositiveField g = plus_part(state(780 + j, 0.3));
      const double nf = l2_norm(f), ng = l2_norm(g);
      for (auto& c : f.coeffs) c /= nf;
      for (auto& c : g.coeffs) c /= ng;
      const PositiveField rf = resolvent_apply(u, kappa, f, ResolventMethod::direct());
      const PositiveField rg = resolvent_apply(u, kappa, g, ResolventMethod::direct());
      worst = std::max(worst, std::abs(inner_l2(rf, g) - inner_l2(f, rg)));
    }
    add("resolvent_selfadjoint", worst, 1e-12,
        "<Rf,g> = <f,Rg> on unit vectors, 20 systems");
  }

  {
    std::mt19937_64 rng(seed0 + 11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int j = 0; j < 25; ++j) {
      const Field u = state(800 + j, 0.1);
      const double norm_u = analytic_norm(u, rho, s);
      const double kappa = (1.5 + unif(rng)) * cs * norm_u;
      const PositiveField m = gauge_m(u, kappa);
      worst = std::max(worst, analytic_norm(m, rho, s) * (kappa - cs * norm_u) / norm_u);
    }
    add("gauge_norm_bound", worst, 1.0,
        "||m|| (kappa - C_s ||u||) <= ||u||, 25 states");
  }

  {
    double worst = 0.0;
    for (int j = 0; j < 10; ++j) {
      const Field u = state(900 + j, 0.1);
      worst = std::max(worst, gauge_identity_residual(u, default_kappa(u)).max_abs);
    }
    add("gauge_identity", worst, cfg.tol.gauge,
        "dx m + (i/2)(kappa m + C_+(u(m-1))) on interior modes, 10 states");
  }

  {
    const double h = 1e-6;
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
      const Field u = state(1000 + j, 0.1);
      const double kappa = default_kappa(u);
      const Field g = beta_gradient(u, kappa);
      for (int d = 0; d < 5; ++d) {
        Field delta = state(1100 + 10 * j + d, 0.3);
        const double nd = l2_norm(delta);
        for (auto& c : delta.coeffs) c /= nd;
        delta.real_valued = true;
        delta.zero_mean = true;
        Field up = u, um = u;
        add_scaled(up, h, delta);
        add_scaled(um, -h, delta);
        const double fd = (beta(up, kappa) - beta(um, kappa)) / (2.0 * h);
        const double ip = std::real(inner_l2(g, delta));
        worst = std::max(worst, std::abs(fd - ip) / std::max(std::abs(fd), std::abs(ip)));
      }
    }
    add("gradient_law", worst, cfg.tol.gradient,
        "central difference of beta vs <grad beta, delta u>, 3 states x 5 directions");
  }

  {
    std::mt19937_64 rng(seed0 + 13);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int j = 0; j < 10; ++j) {
      const Field u = state(1200 + j, 0.1);
      const SpectralData sd = spectral_data(u, lat.n_max);
      const double lambda = -sd.eigenvalues(0) + 1.0 + 19.0 * unif(rng);
      worst = std::max(worst,
                       std::abs(beta(u, lambda) - beta_via_measure(sd, lambda)));
    }
    add("beta_consistency", worst, cfg.tol.beta,
        "resolvent route vs spectral-measure route, 10 pairs (u, lambda)");
  }

  {
    double worst = 0.0;
    for (int j = 0; j < 10; ++j) {
      const Field u = state(1300 + j, 0.3);
      const SpectralData sd = spectral_data(u, lat.n_max);
      const double target = l2_norm(plus_part(u));
      worst = std::max(worst, std::abs(sd.weights.sum() - target * target) /
                                  std::max(1.0, target * target));
    }
    add("parseval_weights", worst, 1e-10, "sum of spectral weights vs ||u_+||^2, 10 states");
  }

  {
    const LatticeSpec wide{32, rho, s};
    const Field u = make_field({{1, cdouble{0.05, 0.0}}}, wide, true);
    const double e16 = exp_energy(u, rho, 16);
    const double e32 = exp_energy(u, rho, 32);
    add("exp_energy_self_convergence", std::abs(e16 - e32), cfg.tol.series,
        "spectral energy at section sizes 16 vs 32 for the standard small state");
  }

  const double rho_int = std::min(rho, 1.0);
  const LatticeSpec lat_int{16, rho_int, 1.0};
  const Field v_small = make_field({{1, cdouble{0.05, 0.0}}}, lat_int, true);
  const double vp_norm = analytic_norm(plus_part(v_small), rho_int, 1.0);

  add("intertwine_identity", intertwine_residual(v_small, rho_int, 16, 512),
      cfg.tol.intertwine, "semigroup conjugation residual at 512 steps");

  {
    const IntertwinerSolution sol = solve_intertwiner(v_small, rho_int, 16, 512);
    double worst = 0.0;
    for (double w : sol.w_norm) worst = std::max(worst, w);
    for (double w : sol.w_inv_norm) worst = std::max(worst, w);
    add("intertwine_norm_bounds", worst, std::exp(gc.c1 * vp_norm) * (1.0 + 1e-6),
        "sup_tau ||W||, ||W^{-1}|| vs exp(c1 ||v_+||), ||v_+|| = " + fmt(vp_norm));
  }

  add("integrated_q_bound", integrated_q_norm(v_small, rho_int, 16, 256),
      gc.c1 * vp_norm + cfg.tol.bound_slack,
      "Simpson integral of ||Q(tau)|| vs c1 ||v_+||_{rho,1}");

  {
    const VectorIdentityCheck vic = vector_identity_check(v_small, rho_int, 16, 512);
    add("vector_identity", std::max(vic.lhs_minus_rhs_norm, vic.energy_route_diff),
        cfg.tol.intertwine,
        "L0 phi = -Q phi + W L_v psi_v, plus the dual energy route");
  }

  {
    double min_slack = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 40; ++j) {
      Field u = state(1400 + j, 0.3);
      const double target = gc.x_max * (0.05 + 0.9 * j / 39.0);
      const double pn = analytic_norm(plus_part(u), rho, 1.0);
      u = (target / pn) * u;
      const TranscendentalBounds tb = transcendental_bounds_report(u, rho);
      min_slack = std::min({min_slack, tb.lower_slack, tb.upper_slack});
    }
    add("transcendental_bounds", -min_slack, 0.0,
        "two-sided energy bounds on 40 states with ||u_+|| swept below x_max");
  }

  {
    const double x = stable_root(0.07, gc);
    add("stable_root_residual", std::abs(bounding_f(x, gc) - 0.07), 1e-11,
        "f(stable_root(0.07)) returns 0.07; root = " + fmt(x));
  }

  return out;
}

}  // namespace bolax
