#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "bolax/errors.hpp"
#include "bolax/field.hpp"
#include "bolax/flow.hpp"
#include "bolax/lax.hpp"
#include "bolax/spectral.hpp"
#include "helpers.hpp"

using namespace bolax;
using helpers::cosine_state;

namespace {
const LatticeSpec kLat{32, 0.5, 1.0};

Field zero_field(const LatticeSpec& lat) {
  Field u(lat);
  u.real_valued = true;
  u.zero_mean = true;
  return u;
}

double drift(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return worst;
}
}  // namespace

TEST_CASE("direct vector field reproduces hand-computed modes") {
  const Field u = cosine_state(1.0, kLat);
  const Field v = vector_field(u, FlowKind::bo());
  // Dispersion contributes -i n |n| u_hat(n): mode 1 gets -i.
  CHECK(v.at(1) == cdouble{0.0, -1.0});
  // u^2 = 2 + 2 cos 2x, and -(1/2) d_x(u^2) contributes -i at mode 2.
  CHECK(v.at(2) == cdouble{0.0, -1.0});
  CHECK(v.at(-1) == std::conj(v.at(1)));
  CHECK(v.at(-2) == std::conj(v.at(2)));
  CHECK(std::abs(v.at(0)) == 0.0);
  CHECK(v.real_valued);
  CHECK(v.zero_mean);
  CHECK_THROWS_AS(FlowKind::h_kappa(0.0), std::invalid_argument);
}

TEST_CASE("regularized vector field collapses to its linear part at u = 0") {
  const Field z = zero_field(kLat);
  const Field v = vector_field(z, FlowKind::h_kappa(64.0));
  CHECK(l2_norm(v) == 0.0);
  const Field r = residual_field(z, 64.0);
  CHECK(l2_norm(r) == 0.0);
}

TEST_CASE("zero data stays exactly zero along the flow") {
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-2;
  cfg.t_end = 0.1;
  cfg.record_every = 5;
  const Trajectory tr = evolve(zero_field(kLat), FlowKind::bo(), cfg);
  for (const Field& s : tr.snapshots) CHECK(l2_norm(s) == 0.0);
  REQUIRE(!tr.report.momentum.empty());
  CHECK(tr.report.momentum.back() == 0.0);
}

TEST_CASE("trajectories preserve reality and zero mean exactly") {
  const Field u0 = random_analytic_field(17, kLat, 0.2, 0.25);
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.record_every = 20;
  const Trajectory tr = evolve(u0, FlowKind::bo(), cfg);
  REQUIRE(tr.snapshots.size() >= 3);
  for (const Field& s : tr.snapshots) {
    CHECK(s.real_valued);
    CHECK(s.zero_mean);
    CHECK(helpers::hermitian_defect(s) == 0.0);
    CHECK(std::abs(s.at(0)) == 0.0);
  }
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("direct flow conserves momentum, energy, and the spectrum") {
  const Field u0 = random_analytic_field(19, kLat, 0.2, 0.25);
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  cfg.record_every = 50;
  cfg.eig_track = 6;
  const Trajectory tr = evolve(u0, FlowKind::bo(), cfg);
  CHECK(drift(tr.report.momentum) < 1e-12);
  CHECK(drift(tr.report.energy) < 1e-10);
  for (std::size_t j = 0; j < 6; ++j) {
    std::vector<double> eig_j;
    for (const auto& row : tr.report.eigenvalues) eig_j.push_back(row[j]);
    CHECK(drift(eig_j) < 1e-6);
  }
  for (std::size_t j = 0; j < tr.report.lambda_probes.size(); ++j) {
    std::vector<double> beta_j;
    for (const auto& row : tr.report.beta_probes) beta_j.push_back(row[j]);
    CHECK(drift(beta_j) < 1e-8);
  }
}

TEST_CASE("regularized flow conserves its invariants with a resolved step") {
  const Field u0 = cosine_state(0.05, kLat);
  const double kappa = default_kappa(u0);
  CHECK(kappa == doctest::Approx(8.0 * kLat.n_max).epsilon(1e-14));
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1.0 / (kappa * kLat.n_max);
  cfg.t_end = 0.125;
  cfg.record_every = 256;
  const Trajectory tr = evolve(u0, FlowKind::h_kappa(kappa), cfg);
  CHECK(drift(tr.report.momentum) < 1e-6);
  CHECK(drift(tr.report.energy) < 1e-6);
}

TEST_CASE("step-halving audit passes when resolved and aborts blowups") {
  const Field u0 = random_analytic_field(23, kLat, 0.1, 0.25);
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.record_every = 10;
  cfg.step_check_tol = 1e-9;
  CHECK_NOTHROW(evolve(u0, FlowKind::bo(), cfg));

  FlowConfig coarse = cfg;
  coarse.step_check_tol = 0.0;
  coarse.dt = 0.05;  // n^2 dt ~ 51 at the top mode: wildly under-resolved
  coarse.t_end = 1.0;
  CHECK_THROWS_AS(evolve(u0, FlowKind::bo(), coarse), NumericalError);
}

TEST_CASE("flow guards reject malformed inputs") {
  FlowConfig cfg;
  cfg.lattice = kLat;
  Field raw(kLat);  // flags not set
  raw.at(1) = {0.1, 0.0};
  raw.at(-1) = {0.1, 0.0};
  CHECK_THROWS_AS(evolve(raw, FlowKind::bo(), cfg), std::invalid_argument);
  CHECK_THROWS_AS(vector_field(raw, FlowKind::bo()), std::invalid_argument);

  const Field u0 = cosine_state(0.1, LatticeSpec{16, 0.5, 1.0});
  CHECK_THROWS_AS(evolve(u0, FlowKind::bo(), cfg), std::invalid_argument);

  FlowConfig bad = cfg;
  bad.dt = -1.0;
  CHECK_THROWS_AS(evolve(zero_field(kLat), FlowKind::bo(), bad), std::invalid_argument);
  bad = cfg;
  bad.record_every = 0;
  CHECK_THROWS_AS(evolve(zero_field(kLat), FlowKind::bo(), bad), std::invalid_argument);
}

TEST_CASE("residual field scales like the reciprocal regularization") {
  const Field u = random_analytic_field(29, kLat, 0.15, 0.25);
  const double eps = kLat.rho / 6.0;
  const double r250 = analytic_norm(residual_field(u, 250.0), kLat.rho - eps, 1.0);
  const double r2000 = analytic_norm(residual_field(u, 2000.0), kLat.rho - eps, 1.0);
  CHECK(r250 > 0.0);
  CHECK(r2000 > 0.0);
  const double ratio = r250 / r2000;  // ideal 1/kappa decay gives exactly 8
  CHECK(ratio >= 5.28);
  CHECK(ratio <= 13.45);
}

TEST_CASE("kappa convergence degenerates cleanly on zero data") {
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-2;
  cfg.record_every = 2;
  const KappaConvergence kc =
      kappa_convergence(zero_field(kLat), {64.0, 128.0}, 0.05, cfg);
  REQUIRE(kc.pairs.size() == 1);
  CHECK(kc.pairs[0].sup_dist_l2 == 0.0);
  CHECK(kc.bo_dist_l2 == 0.0);
  CHECK(kc.kappa_max == 128.0);

  CHECK_THROWS_AS(kappa_convergence(zero_field(kLat), {64.0}, 0.05, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(kappa_convergence(zero_field(kLat), {128.0, 64.0}, 0.05, cfg),
                  std::invalid_argument);
}

TEST_CASE("trap experiment rejects states with too much spectral energy") {
  const Field big = cosine_state(0.8, kLat);
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.record_every = 10;
  CHECK_THROWS_AS(trap_experiment(big, kLat.rho, FlowKind::bo(), cfg), CheckError);
  CHECK_THROWS_WITH_AS(trap_experiment(big, kLat.rho, FlowKind::bo(), cfg),
                       doctest::Contains("not below A_max"), CheckError);
}

TEST_CASE("trap experiment certifies a small state") {
  const GeometricConstants& gc = default_constants();
  const double a = 0.2 * gc.x_max / std::sqrt(2.0 * std::exp(2.0 * kLat.rho));
  const Field u0 = cosine_state(a, kLat);
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  cfg.record_every = 50;
  const TrapReport rep = trap_experiment(u0, kLat.rho, FlowKind::bo(), cfg);
  CHECK(rep.A < gc.A_max);
  CHECK(rep.X_max > 0.0);
  CHECK(rep.X_max <= gc.x_max);
  CHECK(rep.trapped);
  CHECK(rep.sup_norm <= rep.X_max * (1.0 + 1e-4));
  CHECK(rep.bounds_all_ok);
  CHECK(rep.bounds_min_slack > 0.0);
  CHECK(rep.energy_drift_rel < 1e-10);
}

TEST_CASE("report CSV has the promised shape and full precision") {
  const Field u0 = cosine_state(0.05, kLat);
  FlowConfig cfg;
  cfg.lattice = kLat;
  cfg.dt = 1e-2;
  cfg.t_end = 0.05;
  cfg.record_every = 1;
  cfg.eig_track = 3;
  cfg.lambda_probes = {1.0, 4.0};
  const Trajectory tr = evolve(u0, FlowKind::bo(), cfg);

  std::ostringstream os;
  write_report_csv(os, tr.report, {"alpha=1", "beta=2"});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# alpha=1");
  std::getline(is, line);
  CHECK(line == "# beta=2");
  std::getline(is, line);
  CHECK(line == "t,P,H_BO,E_rho,norm_rho1,beta_l1,beta_l2,eig_1,eig_2,eig_3");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == tr.report.times.size());
  // Full round-trip precision: parsing the momentum back must be exact.
  std::istringstream again(os.str());
  for (int skip = 0; skip < 4; ++skip) std::getline(again, line);
  const auto c1pos = line.find(',');
  const auto c2pos = line.find(',', c1pos + 1);
  const double p_back = std::stod(line.substr(c1pos + 1, c2pos - c1pos - 1));
  CHECK(p_back == tr.report.momentum[0]);
}
