#pragma once

// JSON experiment configuration with strict key validation, flag overrides,
// deterministic hashing, and the command dispatcher behind the CLI.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bolax/field.hpp"
#include "bolax/flow.hpp"

namespace bolax {

struct ModeAmplitude {
  int n = 0;
  double re = 0.0;
  double im = 0.0;
};

struct InitialSpec {
  std::string type = "modes";  // "modes" or "random"
  std::vector<ModeAmplitude> modes{{1, 0.05, 0.0}};
  bool symmetrize = true;
  std::uint64_t seed = 42;
  double amplitude = 0.05;
  double decay_margin = 0.25;
};

struct Tolerances {
  double resolvent = 1e-10;
  double gauge = 1e-10;
  double gradient = 1e-6;
  double beta = 1e-10;
  double intertwine = 1e-8;
  double conservation = 1e-6;
  double series = 1e-8;
  double quadrature = 1e-10;
  double trap = 1e-4;
  double bound_slack = 1e-8;
};

struct ExperimentConfig {
  LatticeSpec lattice{32, 0.5, 1.0};
  InitialSpec initial;
  std::string flow_kind = "bo";  // "bo" or "h_kappa"
  double kappa = 0.0;            // 0 selects default_kappa(u0)
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 50;
  std::vector<double> lambda_probes{1.0, 4.0, 16.0};
  std::vector<double> kappas{250.0, 500.0, 1000.0, 2000.0};
  std::string out_dir;  // empty: $BOLAX_OUT_DIR, then ./out
  double step_check_tol = 0.0;
  Tolerances tol;
};

// Overrides (from CLI flags) beat file values; recognized keys: out, seed,
// dt, t_end, kappa.  Unknown JSON keys are rejected by name.
ExperimentConfig parse_config(const std::string& path,
                              const std::map<std::string, std::string>& overrides = {});
ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::map<std::string, std::string>& overrides = {});

Field initial_field(const ExperimentConfig& cfg);
FlowKind flow_kind_of(const ExperimentConfig& cfg, const Field& u0);
FlowConfig flow_config_of(const ExperimentConfig& cfg);

std::string canonical_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);  // FNV-1a over canonical_json
std::string resolve_out_dir(const ExperimentConfig& cfg);
std::vector<std::string> metadata_lines(const ExperimentConfig& cfg);

// constants | verify | simulate | converge | trap.  Returns the process exit
// code: 0 pass, 2 check failure; ConfigError and NumericalError propagate to
// the caller for exit codes 3 and 4.
int dispatch(const ExperimentConfig& cfg, const std::string& command);

}  // namespace bolax
