#include "bolax/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bolax/errors.hpp"
#include "bolax/lax.hpp"
#include "bolax/spectral.hpp"

namespace bolax {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Field dispersion(const Field& u) {
  Field out(u.spec);
  const int n_max = u.spec.n_max;
  for (int n = -n_max; n <= n_max; ++n)
    out.at(n) = cdouble(0.0, -double(n) * std::abs(double(n))) * u.at(n);
  out.real_valued = u.real_valued;
  out.zero_mean = true;
  return out;
}

void rk4_step(Field& u, double dt, const FlowKind& kind) {
  const Field k1 = vector_field(u, kind);
  Field stage = u;
  add_scaled(stage, 0.5 * dt, k1);
  const Field k2 = vector_field(stage, kind);
  stage = u;
  add_scaled(stage, 0.5 * dt, k2);
  const Field k3 = vector_field(stage, kind);
  stage = u;
  add_scaled(stage, dt, k3);
  const Field k4 = vector_field(stage, kind);
  const double h6 = dt / 6.0;
  add_scaled(u, h6, k1);
  add_scaled(u, 2.0 * h6, k2);
  add_scaled(u, 2.0 * h6, k3);
  add_scaled(u, h6, k4);
}

Field integrate_plain(Field u, double dt, long long n_steps, const FlowKind& kind) {
  for (long long step = 0; step < n_steps; ++step) rk4_step(u, dt, kind);
  return u;
}

}  // namespace

FlowKind FlowKind::h_kappa(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("h_kappa flow needs kappa > 0");
  return {Kind::h_kappa, kappa};
}

Field vector_field(const Field& u, const FlowKind& kind) {
  if (!u.real_valued || !u.zero_mean)
    throw std::invalid_argument("vector_field expects a real zero-mean field");
  if (kind.kind == FlowKind::Kind::bo) {
    Field out = dispersion(u);
    add_scaled(out, -0.5, derivative(multiply(u, u)));
    out.real_valued = true;
    out.zero_mean = true;
    return out;
  }
  const double kappa = kind.kappa;
  Field out = derivative(u);
  Field grad_term = derivative(beta_gradient(u, kappa));
  for (auto& c : out.coeffs) c *= -0.5 * kappa;
  add_scaled(out, 0.5 * kappa * kappa, grad_term);
  out.real_valued = true;
  out.zero_mean = true;
  return out;
}

Field residual_field(const Field& u, double kappa) {
  return vector_field(u, FlowKind::h_kappa(kappa)) - vector_field(u, FlowKind::bo());
}

Trajectory evolve(const Field& u0, const FlowKind& kind, const FlowConfig& cfg) {
  if (!u0.real_valued || !u0.zero_mean)
    throw std::invalid_argument("evolve expects a real zero-mean field");
  if (u0.spec.n_max != cfg.lattice.n_max)
    throw std::invalid_argument("evolve: lattice size mismatch between field and config");
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw std::invalid_argument("evolve needs dt > 0 and t_end > 0");
  if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");

  const long long n_steps = std::llround(cfg.t_end / cfg.dt);
  if (n_steps < 1) throw std::invalid_argument("t_end shorter than one step");
  const double dt = cfg.t_end / double(n_steps);
  const double rho = u0.spec.rho;
  const int n_eig = std::clamp(cfg.eig_track, 0, u0.spec.n_max);
  const double guard =
      cfg.norm_guard > 0.0 ? cfg.norm_guard : 10.0 * default_constants().x_max;

  Trajectory traj;
  auto record = [&](double t, const Field& u) {
    const SpectralData sd = spectral_data(u, u.spec.n_max);
    const auto [p, h] = classic_invariants(u);
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
    traj.report.times.push_back(t);
    traj.report.momentum.push_back(p);
    traj.report.energy.push_back(h);
    traj.report.exp_energy.push_back(exp_energy_from(sd, rho));
    traj.report.norm_rho1.push_back(analytic_norm(u, rho, 1.0));
    std::vector<double> betas;
    betas.reserve(cfg.lambda_probes.size());
    for (double lambda : cfg.lambda_probes)
      betas.push_back(beta(u, lambda, ResolventMethod::direct()));
    traj.report.beta_probes.push_back(std::move(betas));
    traj.report.eigenvalues.emplace_back(sd.eigenvalues.begin(),
                                         sd.eigenvalues.begin() + n_eig);
  };
  traj.report.lambda_probes = cfg.lambda_probes;

  Field u = u0;
  record(0.0, u);
  for (long long step = 1; step <= n_steps; ++step) {
    rk4_step(u, dt, kind);
    if (step % cfg.record_every == 0 || step == n_steps) {
      symmetrize_checked(u, 1e-10);
      const double norm = analytic_norm(u, rho, 1.0);
      if (!(norm <= guard))
        throw NumericalError("trajectory norm " + fmt(norm) + " exceeded guard " +
                             fmt(guard) + " at t = " + fmt(double(step) * dt));
      record(double(step) * dt, u);
    }
  }

  if (cfg.step_check_tol > 0.0) {
    const Field fine = integrate_plain(u0, 0.5 * dt, 2 * n_steps, kind);
    const double dist = l2_norm(u - fine);
    if (!(dist <= cfg.step_check_tol))
      throw NumericalError("step-halving audit failed: terminal states differ by " +
                           fmt(dist) + " > " + fmt(cfg.step_check_tol));
  }
  return traj;
}

KappaConvergence kappa_convergence(const Field& u0, const std::vector<double>& kappas,
                                   double t_end, const FlowConfig& cfg) {
  if (kappas.size() < 2) throw std::invalid_argument("need at least two kappa values");
  for (std::size_t i = 1; i < kappas.size(); ++i)
    if (!(kappas[i] > kappas[i - 1]))
      throw std::invalid_argument("kappa values must be strictly increasing");

  const int n_max = u0.spec.n_max;
  const double delta_raw = cfg.dt * double(cfg.record_every);
  const long long n_rec = std::max(1LL, std::llround(t_end / delta_raw));
  const double delta = t_end / double(n_rec);

  auto run = [&](const FlowKind& kind, double dt_cap) {
    const long long n_sub = std::max(
        1LL, static_cast<long long>(std::ceil(delta / dt_cap - 1e-12)));
    FlowConfig sub = cfg;
    sub.dt = delta / double(n_sub);
    sub.t_end = t_end;
    sub.record_every = static_cast<int>(n_sub);
    sub.step_check_tol = 0.0;
    return evolve(u0, kind, sub);
  };

  KappaConvergence out;
  out.epsilon = u0.spec.rho / 6.0;
  out.kappa_max = kappas.back();
  const double rho_eps = u0.spec.rho - out.epsilon;

  std::vector<Trajectory> trajs;
  trajs.reserve(kappas.size());
  for (double kappa : kappas)
    trajs.push_back(run(FlowKind::h_kappa(kappa), 1.0 / (kappa * double(n_max))));
  const Trajectory direct = run(FlowKind::bo(), cfg.dt);

  auto sup_dists = [&](const Trajectory& a, const Trajectory& b) {
    if (a.snapshots.size() != b.snapshots.size())
      throw std::logic_error("recording grids out of alignment");
    double sup_l2 = 0.0, sup_rho1 = 0.0;
    for (std::size_t j = 0; j < a.snapshots.size(); ++j) {
      const Field diff = a.snapshots[j] - b.snapshots[j];
      sup_l2 = std::max(sup_l2, l2_norm(diff));
      sup_rho1 = std::max(sup_rho1, analytic_norm(diff, rho_eps, 1.0));
    }
    return std::pair{sup_l2, sup_rho1};
  };

  for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
    const auto [d2, dr] = sup_dists(trajs[i], trajs[i + 1]);
    out.pairs.push_back({kappas[i], kappas[i + 1], d2, dr});
  }
  out.bo_dist_l2 = sup_dists(trajs.back(), direct).first;
  return out;
}

TrapReport trap_experiment(const Field& u0, double rho, const FlowKind& kind,
                           const FlowConfig& cfg) {
  const GeometricConstants gc = default_constants();
  TrapReport rep;
  rep.A = std::sqrt(exp_energy(u0, rho, u0.spec.n_max));
  const double plus_norm0 = analytic_norm(plus_part(u0), rho, 1.0);
  if (!(rep.A < gc.A_max))
    throw CheckError("trap experiment: sqrt(initial energy) = " + fmt(rep.A) +
                     " is not below A_max = " + fmt(gc.A_max));
  if (!(plus_norm0 <= gc.x_max))
    throw CheckError("trap experiment: initial plus-part norm " + fmt(plus_norm0) +
                     " exceeds x_max = " + fmt(gc.x_max));
  rep.X_max = stable_root(rep.A, gc);

  const Trajectory traj = evolve(u0, kind, cfg);

  rep.bounds_all_ok = true;
  rep.bounds_min_slack = std::numeric_limits<double>::infinity();
  for (const Field& snap : traj.snapshots) {
    rep.sup_norm = std::max(rep.sup_norm, analytic_norm(plus_part(snap), rho, 1.0));
    const TranscendentalBounds tb = transcendental_bounds_report(snap, rho);
    rep.bounds_all_ok = rep.bounds_all_ok && tb.lower_ok && tb.upper_ok;
    rep.bounds_min_slack =
        std::min({rep.bounds_min_slack, tb.lower_slack, tb.upper_slack});
  }
  const double e0 = traj.report.exp_energy.front();
  for (double e : traj.report.exp_energy)
    rep.energy_drift_rel = std::max(rep.energy_drift_rel, std::abs(e - e0) / e0);
  rep.trapped = rep.sup_norm <= rep.X_max * (1.0 + 1e-4);
  return rep;
}

void write_report_csv(std::ostream& os, const InvariantReport& report,
                      const std::vector<std::string>& meta_lines) {
  for (const auto& line : meta_lines) os << "# " << line << "\n";
  os << "t,P,H_BO,E_rho,norm_rho1";
  for (std::size_t i = 0; i < report.lambda_probes.size(); ++i)
    os << ",beta_l" << (i + 1);
  const std::size_t n_eig = report.eigenvalues.empty() ? 0 : report.eigenvalues[0].size();
  for (std::size_t i = 0; i < n_eig; ++i) os << ",eig_" << (i + 1);
  os << "\n";
  for (std::size_t r = 0; r < report.times.size(); ++r) {
    os << fmt(report.times[r]) << ',' << fmt(report.momentum[r]) << ','
       << fmt(report.energy[r]) << ',' << fmt(report.exp_energy[r]) << ','
       << fmt(report.norm_rho1[r]);
    for (double b : report.beta_probes[r]) os << ',' << fmt(b);
    for (double e : report.eigenvalues[r]) os << ',' << fmt(e);
    os << "\n";
  }
}

}  // namespace bolax
