#include "qpe/commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qpe/dynamics.hpp"
#include "qpe/metrology.hpp"
#include "qpe/sme.hpp"

namespace qpe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ControlSetting {
  const char* name;
  double u1;
  double u2;
};

std::vector<ControlSetting> control_settings(const RunConfig& rc) {
  return {{"none", 0.0, 0.0},
          {"linear", rc.u1, 0.0},
          {"kerr", 0.0, rc.u2},
          {"both", rc.u1, rc.u2}};
}

SystemConfig with_controls(const RunConfig& rc, const ControlSetting& c) {
  SystemConfig config = rc.system();
  config.u1 = c.u1;
  config.u2 = c.u2;
  config.validate();
  return config;
}

double tau_at(const TauGrid& g, int i) {
  if (g.count == 1) return g.start;
  return g.start + (g.stop - g.start) * i / (g.count - 1);
}

fs::path out_path(const RunConfig& rc, const std::string& name) {
  return fs::path(rc.out_dir) / name;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create output directory " +
                    path.parent_path().string() + ": " + ec.message());
    }
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    if (!out.flush()) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() +
                  ": " + ec.message());
  }
}

std::vector<fs::path> cmd_qfi_curve(const RunConfig& rc) {
  std::ostringstream csv;
  csv << "tau,control,method,qfi\n";
  for (const ControlSetting& c : control_settings(rc)) {
    const SystemConfig config = with_controls(rc, c);
    for (int i = 0; i < rc.tau_grid.count; ++i) {
      const double tau = tau_at(rc.tau_grid, i);
      const QfiResult exact = qfi_exact_at(config, tau / config.gamma);
      csv << format_double(tau) << ',' << c.name << ",exact_eig,"
          << format_double(exact.value) << '\n';
    }
    for (int i = 0; i < rc.tau_grid.count; ++i) {
      const double tau = tau_at(rc.tau_grid, i);
      const QfiResult approx = qfi_approx_closed(tau, config);
      csv << format_double(tau) << ',' << c.name << ",closed_form,"
          << format_double(approx.value) << '\n';
    }
  }
  const fs::path path = out_path(rc, "qfi_curve.csv");
  write_file_atomic(path, csv.str());
  return {path};
}

std::vector<fs::path> cmd_fidelity_curve(const RunConfig& rc) {
  std::ostringstream csv;
  csv << "tau,control,method,fidelity\n";
  for (const ControlSetting& c : control_settings(rc)) {
    const SystemConfig config = with_controls(rc, c);
    // Unit-trace reference state: the truncated coherent vector renormalized,
    // so F(rho0, rho0) is exactly 1 rather than 1 - tail.
    CoherentState cs = coherent_state(config.alpha, config.dim);
    const Eigen::VectorXcd phi = cs.vec.amplitudes.normalized();
    const DensityMatrix rho0(ComplexMatrix(Eigen::MatrixXcd(phi * phi.adjoint())),
                             cs.tail);
    for (int i = 0; i < rc.tau_grid.count; ++i) {
      const double tau = tau_at(rc.tau_grid, i);
      EvolutionResult evo = evolve_analytic(config, tau, /*renormalize=*/true);
      const FidelityResult f = fidelity_uhlmann(rho0, evo.state, tau);
      csv << format_double(tau) << ',' << c.name << ",uhlmann,"
          << format_double(f.value) << '\n';
    }
    for (int i = 0; i < rc.tau_grid.count; ++i) {
      const double tau = tau_at(rc.tau_grid, i);
      const FidelityResult f = fidelity_approx(tau, config);
      csv << format_double(tau) << ',' << c.name << ",pure_closed_form,"
          << format_double(f.value) << '\n';
    }
  }
  const fs::path path = out_path(rc, "fidelity_curve.csv");
  write_file_atomic(path, csv.str());
  return {path};
}

std::vector<fs::path> cmd_optimize(const RunConfig& rc) {
  std::ostringstream csv;
  csv << "u1,u2,i_star,d\n";
  for (const ParetoPoint& p : evaluate_grid(rc.grid, rc.gamma)) {
    csv << format_double(p.u1) << ',' << format_double(p.u2) << ','
        << format_double(p.i_star) << ',' << format_double(p.d) << '\n';
  }
  const fs::path surface = out_path(rc, "qfi_surface.csv");
  write_file_atomic(surface, csv.str());

  json reports = json::array();
  for (double epsilon : rc.epsilons) {
    const ConstrainedOptimum opt =
        epsilon_constrained_optimize(rc.grid, rc.gamma, epsilon);
    reports.push_back({{"epsilon", opt.epsilon},
                       {"feasible_count", opt.feasible_count},
                       {"boundary_distance", opt.boundary_distance},
                       {"best",
                        {{"u1", opt.best.u1},
                         {"u2", opt.best.u2},
                         {"alpha2", opt.best.alpha2},
                         {"i_star", opt.best.i_star},
                         {"d", opt.best.d}}}});
  }
  const fs::path report = out_path(rc, "optimize_report.json");
  write_file_atomic(report, reports.dump(2) + "\n");
  return {surface, report};
}

std::vector<fs::path> cmd_scan_alpha(const RunConfig& rc) {
  GridSpec spec = rc.grid;
  spec.u1_range = {0.0, 0.0, 1};
  std::ostringstream csv;
  csv << "u2,alpha2,i_star,d\n";
  for (const ParetoPoint& p : evaluate_grid(spec, rc.gamma)) {
    csv << format_double(p.u2) << ',' << format_double(p.alpha2) << ','
        << format_double(p.i_star) << ',' << format_double(p.d) << '\n';
  }
  const fs::path path = out_path(rc, "alpha_scan.csv");
  write_file_atomic(path, csv.str());
  return {path};
}

std::vector<fs::path> cmd_estimate(const RunConfig& rc) {
  const double center =
      rc.candidates.center > 0.0 ? rc.candidates.center : rc.gamma;
  const double spread =
      rc.candidates.spread >= 0.0 ? rc.candidates.spread : 0.4 * center;
  const CandidateSet candidates =
      generate_candidates(center, spread, rc.candidates.n, rc.seed);

  const SystemConfig config = rc.system();
  const MeasurementRecord record = simulate_trajectory(
      rc.gamma, config, rc.duration, rc.dt, rc.efficiency, rc.seed + 1);
  const PosteriorState posterior =
      update_posteriors(record, candidates, config);

  std::ostringstream csv;
  csv << "t,gamma_hat";
  for (size_t i = 0; i < candidates.rates.size(); ++i) {
    csv << ",p_" << (i + 1);
  }
  csv << '\n';
  for (size_t k = 0; k < posterior.times.size(); ++k) {
    csv << format_double(posterior.times[k]) << ','
        << format_double(posterior.estimate_over_time[k]);
    for (double w : posterior.weights_over_time[k]) {
      csv << ',' << format_double(w);
    }
    csv << '\n';
  }
  const fs::path series = out_path(rc, "estimate_timeseries.csv");
  write_file_atomic(series, csv.str());

  json summary = {{"final_gamma_hat", estimate_gamma(posterior)},
                  {"gamma_true", rc.gamma},
                  {"candidates", candidates.rates},
                  {"prior", candidates.prior},
                  {"efficiency", rc.efficiency},
                  {"duration", rc.duration},
                  {"dt", rc.dt},
                  {"seed", rc.seed}};
  const fs::path summary_path = out_path(rc, "estimate_summary.json");
  write_file_atomic(summary_path, summary.dump(2) + "\n");
  return {series, summary_path};
}

std::vector<fs::path> cmd_evolve(const RunConfig& rc) {
  const SystemConfig config = rc.system();
  std::ostringstream csv;
  csv << "tau,p,q,re,im\n";
  for (int i = 0; i < rc.tau_grid.count; ++i) {
    const double tau = tau_at(rc.tau_grid, i);
    EvolutionResult evo = evolve_analytic(config, tau);
    for (int p = 0; p < config.dim; ++p) {
      for (int q = 0; q < config.dim; ++q) {
        const Complex v = evo.state.matrix().at(p, q);
        csv << format_double(tau) << ',' << p << ',' << q << ','
            << format_double(v.real()) << ',' << format_double(v.imag())
            << '\n';
      }
    }
  }
  const fs::path path = out_path(rc, "evolution.csv");
  write_file_atomic(path, csv.str());
  return {path};
}

std::vector<fs::path> run_scenario(const RunConfig& rc) {
  if (rc.scenario == "qfi-curve") return cmd_qfi_curve(rc);
  if (rc.scenario == "fidelity-curve") return cmd_fidelity_curve(rc);
  if (rc.scenario == "optimize") return cmd_optimize(rc);
  if (rc.scenario == "scan-alpha") return cmd_scan_alpha(rc);
  if (rc.scenario == "estimate") return cmd_estimate(rc);
  if (rc.scenario == "evolve") return cmd_evolve(rc);
  throw ConfigError("unknown scenario \"" + rc.scenario + "\"");
}

}  // namespace qpe
