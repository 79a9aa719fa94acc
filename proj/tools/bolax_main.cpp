#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bolax/config.hpp"
#include "bolax/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "bolax: spectral toolbox for a periodic dispersive flow, its Lax matrix, "
      "and the regularized Hamiltonian flows that approximate it"};
  app.require_subcommand(1);

  std::string command;
  std::string config_path;
  std::string out, seed, dt, t_end, kappa;

  const std::pair<const char*, const char*> commands[] = {
      {"constants", "compute the geometric constants and write constants.json"},
      {"verify", "run the invariant/property suite and write verify.json"},
      {"simulate", "integrate the configured flow and write simulate.csv"},
      {"converge", "run the kappa sweep and write converge.csv"},
      {"trap", "run the trapping experiment and write trap.json"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file (defaults apply if omitted)");
    sub->add_option("--out", out, "output directory (beats file and BOLAX_OUT_DIR)");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--dt", dt, "time step override");
    sub->add_option("--t-end", t_end, "final time override");
    sub->add_option("--kappa", kappa, "regularization parameter override");
    sub->callback([&command, name = name] { command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  std::map<std::string, std::string> overrides;
  if (!out.empty()) overrides["out"] = out;
  if (!seed.empty()) overrides["seed"] = seed;
  if (!dt.empty()) overrides["dt"] = dt;
  if (!t_end.empty()) overrides["t_end"] = t_end;
  if (!kappa.empty()) overrides["kappa"] = kappa;

  try {
    const bolax::ExperimentConfig cfg =
        config_path.empty() ? bolax::config_from_json_text("{}", overrides)
                            : bolax::parse_config(config_path, overrides);
    return bolax::dispatch(cfg, command);
  } catch (const bolax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const bolax::CheckError& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 2;
  } catch (const bolax::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
