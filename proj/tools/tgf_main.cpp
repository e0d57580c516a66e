// Command-line driver: simulate, optimize and verification suites.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "tgf/control.hpp"
#include "tgf/io.hpp"
#include "tgf/noise.hpp"
#include "tgf/operators.hpp"
#include "tgf/state_solver.hpp"
#include "tgf/verify.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kError = 1, kConfig = 2, kNonFinite = 3, kStepCollapse = 4, kCheckFail = 5 };

fs::path output_dir(const tgf::RunConfig& cfg) {
  const fs::path dir = cfg.resolve(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

tgf::Trajectory forcing_for_simulation(const tgf::RunConfig& cfg) {
  if (cfg.control_file.empty()) return tgf::synthetic_control(cfg);
  const tgf::Trajectory f = tgf::read_trajectory(cfg.resolve(cfg.control_file));
  if (!(f.grid() == cfg.grid) || f.steps() != cfg.time.steps()) {
    throw tgf::ConfigError("paths.control_file", "control trajectory does not match grid/time settings");
  }
  return tgf::Trajectory(cfg.time, tgf::Role::control_f, f.snapshots());
}

void print_noise_summary(const tgf::RunConfig& cfg) {
  const tgf::TraceDiagnostics d = tgf::trace_diagnostics(cfg.noise, cfg.grid);
  std::cerr << "noise: Tr(GG*)=" << d.tr_gg << " Tr(A^(3-2gamma)GG*)=" << d.tr_weighted_reg
            << " |GG*|_op=" << d.op_norm << " theta=" << cfg.noise.theta;
  if (cfg.noise.c_hat) std::cerr << " (minimal admissible theta " << d.min_theta << ")";
  std::cerr << '\n';
}

int run_simulate(const std::string& config, bool direct) {
  const tgf::RunConfig cfg = tgf::load_config(config);
  print_noise_summary(cfg);
  const fs::path dir = output_dir(cfg);
  const tgf::Trajectory f = forcing_for_simulation(cfg);
  const tgf::SpectralField v0 = tgf::initial_state(cfg);
  if (direct) {
    const tgf::Trajectory v = tgf::solve_state_direct(v0, f, cfg.noise, 0, cfg.fluid);
    tgf::StateRunReport rep;
    for (int n = 0; n <= cfg.time.steps(); ++n) {
      const double l2 = tgf::hs_seminorm(v[n], 0.0), h1 = tgf::hs_seminorm(v[n], 1.0);
      const double h2 = tgf::hs_seminorm(v[n], 2.0), h3 = tgf::hs_seminorm(v[n], 3.0);
      rep.t.push_back(cfg.time.t(n));
      rep.u_l2sq.push_back(l2 * l2);
      rep.u_grad_l2sq.push_back(h1 * h1);
      rep.Au_l2sq.push_back(h2 * h2);
      rep.A32u_l2sq.push_back(h3 * h3);
      rep.Av_L4_4.push_back(tgf::rivlin_l4_pow4(v[n]));
      rep.energy_residual.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    tgf::write_trajectory(dir / "v.tgf", v);
    tgf::write_report_csv(dir / "report.csv", rep);
    std::cout << "simulate --direct: wrote " << (dir / "v.tgf").string() << '\n';
    return kOk;
  }
  const tgf::Trajectory z = tgf::noise_trajectory(cfg.noise, cfg.fluid.alpha1, cfg.grid, cfg.time, 0);
  const tgf::StateSolution sol = tgf::solve_state(v0, f, z, cfg.fluid, cfg.noise.theta, true);
  const tgf::Trajectory v = tgf::reconstruct_v(sol.u, z);
  tgf::write_trajectory(dir / "u.tgf", sol.u);
  tgf::write_trajectory(dir / "z.tgf", z);
  tgf::write_trajectory(dir / "v.tgf", v);
  tgf::write_report_csv(dir / "report.csv", sol.report);
  double worst = 0.0;
  for (double r : sol.report.energy_residual) worst = std::max(worst, r);
  std::cout << "simulate: wrote u.tgf z.tgf v.tgf report.csv to " << dir.string()
            << " (max energy-rate residual " << worst << ")\n";
  return kOk;
}

int run_optimize(const std::string& config) {
  const tgf::RunConfig cfg = tgf::load_config(config);
  print_noise_summary(cfg);
  const fs::path dir = output_dir(cfg);
  const tgf::ControlProblem problem = tgf::build_problem(cfg);
  const tgf::Trajectory f0(cfg.grid, cfg.time, tgf::Role::control_f);
  const tgf::OptimizerState st = tgf::optimize(problem, f0, cfg.optimizer);
  tgf::write_history_csv(dir / "history.csv", st.history);
  const fs::path control = cfg.control_file.empty() ? dir / "control.tgf" : cfg.resolve(cfg.control_file);
  tgf::write_trajectory(control, st.f);
  const auto& last = st.history.back();
  std::cout << "optimize: " << st.iterations << " iterations, J=" << last.J << " residual=" << last.residual
            << " (initial " << st.history.front().residual << "), control written to " << control.string() << '\n';
  return kOk;
}

int run_check(const std::string& suite, const std::string& config) {
  const tgf::RunConfig cfg = tgf::load_config(config);
  std::vector<tgf::CheckResult> res;
  if (suite == "invariants") {
    res = tgf::check_invariants(cfg);
  } else if (suite == "identity") {
    res = tgf::check_identity(cfg);
  } else if (suite == "duality") {
    res = tgf::check_duality(cfg);
  } else if (suite == "gradient") {
    res = tgf::check_gradient(cfg);
  } else {
    res = tgf::check_ou_stats(cfg);
  }
  for (const auto& r : res) {
    std::printf("%s  %-52s measured=%.3e tol=%.1e%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured,
                r.tolerance, r.note.empty() ? "" : "  ", r.note.c_str());
  }
  return tgf::all_pass(res) ? kOk : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic third-grade fluid simulation and optimal control"};
  app.require_subcommand(1);

  std::string config;
  bool direct = false;
  auto* sim = app.add_subcommand("simulate", "Integrate the state equation and write trajectories");
  sim->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sim->add_flag("--direct", direct, "Use the semi-implicit Euler-Maruyama integrator on v");

  auto* opt = app.add_subcommand("optimize", "Run the projected-gradient control optimizer");
  opt->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);

  std::string suite;
  auto* chk = app.add_subcommand("check", "Run a verification suite");
  chk->add_option("suite", suite, "invariants | identity | duality | gradient | ou-stats")
      ->required()
      ->check(CLI::IsMember({"invariants", "identity", "duality", "gradient", "ou-stats"}));
  chk->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(config, direct);
    if (opt->parsed()) return run_optimize(config);
    return run_check(suite, config);
  } catch (const tgf::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const tgf::NonFiniteError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNonFinite;
  } catch (const tgf::StepCollapseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStepCollapse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
