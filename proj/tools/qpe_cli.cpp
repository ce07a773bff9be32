// Command-line front end: reads one JSON configuration document (plus
// per-key overrides) and emits deterministic CSV/JSON artifacts.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qpe/commands.hpp"
#include "qpe/errors.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 numerical/invariant
// failure, 4 I/O failure.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kIoError = 4;

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::string format;
  double alpha_re, alpha_im, gamma, u1, u2, efficiency, duration, dt;
  int dim = 0;
  std::uint64_t seed = 0;
  bool has_alpha_re = false, has_alpha_im = false, has_gamma = false,
       has_u1 = false, has_u2 = false, has_dim = false, has_seed = false,
       has_efficiency = false, has_duration = false, has_dt = false;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON configuration document");
  cmd->add_option("--out_dir", ov.out_dir, "output directory");
  cmd->add_option("--format", ov.format, "csv or json");
  cmd->add_option("--alpha_re", ov.alpha_re, "Re(alpha)")
      ->each([&](const std::string&) { ov.has_alpha_re = true; });
  cmd->add_option("--alpha_im", ov.alpha_im, "Im(alpha)")
      ->each([&](const std::string&) { ov.has_alpha_im = true; });
  cmd->add_option("--gamma", ov.gamma, "dissipation rate")
      ->each([&](const std::string&) { ov.has_gamma = true; });
  cmd->add_option("--u1", ov.u1, "rescaled linear control")
      ->each([&](const std::string&) { ov.has_u1 = true; });
  cmd->add_option("--u2", ov.u2, "rescaled Kerr control")
      ->each([&](const std::string&) { ov.has_u2 = true; });
  cmd->add_option("--dim", ov.dim, "Fock truncation")
      ->each([&](const std::string&) { ov.has_dim = true; });
  cmd->add_option("--seed", ov.seed, "random seed")
      ->each([&](const std::string&) { ov.has_seed = true; });
  cmd->add_option("--efficiency", ov.efficiency, "measurement efficiency")
      ->each([&](const std::string&) { ov.has_efficiency = true; });
  cmd->add_option("--duration", ov.duration, "record duration")
      ->each([&](const std::string&) { ov.has_duration = true; });
  cmd->add_option("--dt", ov.dt, "integration step")
      ->each([&](const std::string&) { ov.has_dt = true; });
}

qpe::RunConfig build_config(const Overrides& ov, const std::string& scenario) {
  qpe::RunConfig rc = ov.config_path.empty()
                          ? qpe::RunConfig{}
                          : qpe::RunConfig::from_file(ov.config_path);
  rc.scenario = scenario;
  if (!ov.out_dir.empty()) rc.out_dir = ov.out_dir;
  if (!ov.format.empty()) rc.format = ov.format;
  if (ov.has_alpha_re) rc.alpha_re = ov.alpha_re;
  if (ov.has_alpha_im) rc.alpha_im = ov.alpha_im;
  if (ov.has_gamma) rc.gamma = ov.gamma;
  if (ov.has_u1) rc.u1 = ov.u1;
  if (ov.has_u2) rc.u2 = ov.u2;
  if (ov.has_dim) rc.dim = ov.dim;
  if (ov.has_seed) rc.seed = ov.seed;
  if (ov.has_efficiency) rc.efficiency = ov.efficiency;
  if (ov.has_duration) rc.duration = ov.duration;
  if (ov.has_dt) rc.dt = ov.dt;
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled damped-mode estimation toolkit"};
  app.require_subcommand(1);

  Overrides ov;
  const char* scenarios[] = {"qfi-curve", "fidelity-curve", "optimize",
                             "scan-alpha", "estimate", "evolve"};
  const char* descriptions[] = {
      "QFI curves over tau for the four control settings",
      "fidelity curves over tau for the four control settings",
      "epsilon-constrained optimization over the control grid",
      "i_star and deformation over (u2, |alpha|^2)",
      "one seeded dissipation-rate estimation experiment",
      "density-matrix elements of the analytic solution"};
  for (int i = 0; i < 6; ++i) {
    add_common_options(app.add_subcommand(scenarios[i], descriptions[i]), ov);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const std::string scenario = app.get_subcommands().front()->get_name();
    const qpe::RunConfig rc = build_config(ov, scenario);
    for (const auto& path : qpe::run_scenario(rc)) {
      std::cout << path.string() << '\n';
    }
    return kOk;
  } catch (const qpe::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qpe::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qpe::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const qpe::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
