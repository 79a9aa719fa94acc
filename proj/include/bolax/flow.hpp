#pragma once

// Time integration of the direct flow and the regularized flows, invariant
// tracking along trajectories, the residual-decay sweep, convergence of the
// regularized flows, and the trapping experiment.

#include <iosfwd>
#include <string>
#include <vector>

#include "bolax/field.hpp"

namespace bolax {

struct FlowKind {
  enum class Kind { bo, h_kappa };
  Kind kind = Kind::bo;
  double kappa = 0.0;

  static FlowKind bo() { return {}; }
  static FlowKind h_kappa(double kappa);
};

struct FlowConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 50;
  LatticeSpec lattice{32, 0.5, 1.0};
  std::vector<double> lambda_probes{1.0, 4.0, 16.0};
  int eig_track = 8;
  double step_check_tol = 0.0;  // L2 gate between dt and dt/2 runs; 0 disables
  double norm_guard = 0.0;      // abort threshold for ||u||_{rho,1}; 0 = 10 x_max
};

struct InvariantReport {
  std::vector<double> times;
  std::vector<double> momentum, energy, exp_energy, norm_rho1;
  std::vector<double> lambda_probes;
  std::vector<std::vector<double>> beta_probes;  // row per recorded time
  std::vector<std::vector<double>> eigenvalues;  // row per time, lowest k
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  InvariantReport report;
};

// bo: -H d_xx u - (1/2) d_x(u^2); h_kappa: -(kappa/2) d_x u +
// (kappa^2/2) d_x(m + conj m - |m|^2).  Output is exactly Hermitian-symmetric
// and zero-mean.
Field vector_field(const Field& u, const FlowKind& kind);

// V_kappa(u) - V_bo(u), by subtraction; decays like 1/kappa.
Field residual_field(const Field& u, double kappa);

// Classical fourth-order stepping with n_steps = round(t_end/dt) uniform
// steps.  Recorded snapshots are re-symmetrized (drift must stay below
// 1e-10) and gated against norm explosion.
Trajectory evolve(const Field& u0, const FlowKind& kind, const FlowConfig& cfg);

struct KappaPairRow {
  double kappa_a = 0.0, kappa_b = 0.0;
  double sup_dist_l2 = 0.0;
  double sup_dist_rho1 = 0.0;  // in the rho - epsilon norm
};

struct KappaConvergence {
  std::vector<KappaPairRow> pairs;
  double epsilon = 0.0;
  double kappa_max = 0.0;
  double bo_dist_l2 = 0.0;  // largest-kappa trajectory vs the direct flow
};

// Trajectories are recorded on a common time grid (spacing dt*record_every,
// aligned to t_end); each kappa integrates with its own dt <= 1/(kappa N).
KappaConvergence kappa_convergence(const Field& u0, const std::vector<double>& kappas,
                                   double t_end, const FlowConfig& cfg);

struct TrapReport {
  double A = 0.0;         // sqrt of the initial exponential spectral energy
  double X_max = 0.0;     // stable root of f(X) = A
  double sup_norm = 0.0;  // sup_t ||u_+(t)||_{rho,1}
  bool trapped = false;
  double energy_drift_rel = 0.0;
  bool bounds_all_ok = false;   // two-sided norm/energy bounds at each snapshot
  double bounds_min_slack = 0.0;
};

TrapReport trap_experiment(const Field& u0, double rho, const FlowKind& kind,
                           const FlowConfig& cfg);

void write_report_csv(std::ostream& os, const InvariantReport& report,
                      const std::vector<std::string>& meta_lines);

}  // namespace bolax
