#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wvsim/conditions.hpp"
#include "wvsim/config.hpp"
#include "wvsim/errors.hpp"
#include "wvsim/interferometer.hpp"
#include "wvsim/meter.hpp"
#include "wvsim/report_io.hpp"
#include "wvsim/weak_values.hpp"

#ifndef WVSIM_VERSION
#define WVSIM_VERSION "0.0.0"
#endif

namespace {

constexpr int kExitFailure = 1;   // residuals above tolerance
constexpr int kExitConfig = 2;    // usage / config errors
constexpr int kExitPhysical = 3;  // orthogonal post-selection

struct SolveAnglesOptions {
  bool joint = false;
  std::optional<double> alpha_deg;
  std::optional<std::string> sweep;  // START:STOP:STEP in degrees
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  double tol = 1e-8;
};

struct ScenarioOptions {
  std::string config_path;
  std::optional<std::string> out_path;
  double tol = 1e-10;
  double eps = 1e-3;
};

struct MeterOptions {
  std::string config_path;
  std::vector<double> g_list{1e-1, 1e-2, 1e-3};
  std::string obs = "pi_a";
  std::optional<std::string> out_path;
};

void emit(const std::optional<std::string>& out_path, const std::string& csv,
          wvsim::RunManifest& manifest) {
  if (out_path) {
    wvsim::write_file_atomic(*out_path, csv);
    manifest.output_paths.push_back(*out_path);
  } else {
    std::cout << csv;
  }
  wvsim::print_manifest(std::cerr, manifest);
}

void print_roots_for_alpha(std::ostream& os, wvsim::Angle alpha, double tol,
                           bool& tol_ok) {
  using namespace wvsim;
  os.precision(15);
  os << "alpha = " << alpha.deg() << " deg\n";
  const auto roots = solve_phi(alpha);
  if (roots.empty()) {
    os << "  no phi roots in [0, 360) deg\n";
  }
  for (const Angle& phi : roots) {
    const double res = std::abs(residual_condition1(alpha, phi));
    tol_ok = tol_ok && res < tol;
    os << "  phi root = " << phi.deg() << " deg   |condition1| = " << res
       << "\n";
    for (const Angle& gamma : solve_gamma(alpha, phi)) {
      const double cc = std::abs(residual_cheshire(alpha, phi, gamma));
      os << "    gamma root = " << gamma.deg()
         << " deg   |residual| = " << cc << "\n";
    }
  }
  try {
    const Angle closed = phi_closed_form(alpha, 0);
    const double res = std::abs(residual_condition1(alpha, closed));
    os << "  closed-form phi (n=0) = " << closed.deg()
       << " deg   |condition1| = " << res << "\n";
    if (res >= tol) {
      os << "  WARNING: closed form does not satisfy condition1 at this "
            "alpha (discrepancy logged)\n";
    }
  } catch (const SingularAlpha&) {
    os << "  closed-form phi singular at this alpha (numeric roots above "
          "remain valid)\n";
  }
}

int cmd_solve_angles(const SolveAnglesOptions& opt) {
  using namespace wvsim;
  bool tol_ok = true;

  std::optional<SweepSettings> sweep;
  std::uint64_t hash = 0;
  if (opt.config_path) {
    const ParsedScenario parsed = load_scenario(*opt.config_path);
    sweep = parsed.sweep;
    hash = parsed.hash;
    if (!sweep) {
      throw ConfigError("config '" + *opt.config_path +
                        "' has no [sweep] section");
    }
  }
  if (opt.sweep) {
    std::istringstream in(*opt.sweep);
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' ||
        c2 != ':' || !(in >> std::ws).eof() || step <= 0.0 || stop < start) {
      throw ConfigError("--sweep expects START:STOP:STEP in degrees");
    }
    sweep = SweepSettings{Angle::degrees(start), Angle::degrees(stop),
                          Angle::degrees(step)};
  }

  if (sweep) {
    std::vector<SweepRow> rows;
    int discrepancies = 0;
    for (double a = sweep->start.deg(); a <= sweep->stop.deg() + 1e-9;
         a += sweep->step.deg()) {
      const Angle alpha = Angle::degrees(a);
      std::vector<double> alphas{alpha.rad()};
      const auto checks = cross_validate_phi_closed_form(alphas, opt.tol);
      const ClosedFormCheck& check = checks.front();
      for (const Angle& phi : solve_phi(alpha)) {
        SweepRow row;
        row.alpha_deg = a;
        row.phi_root_deg = phi.deg();
        row.abs_c1 = std::abs(residual_condition1(alpha, phi));
        row.closed_singular = check.singular;
        row.phi_closed_deg = check.phi_closed_rad * 180.0 / M_PI;
        row.abs_c1_closed = check.residual_abs;
        row.branch_n = check.branch_n;
        row.discrepancy = !check.singular && !check.matched;
        tol_ok = tol_ok && row.abs_c1 < opt.tol;
        rows.push_back(row);
      }
      if (!check.singular && !check.matched) {
        ++discrepancies;
        std::cerr << "discrepancy: alpha = " << a
                  << " deg, closed-form residual = " << check.residual_abs
                  << "\n";
      }
    }
    std::ostringstream csv;
    write_sweep_csv(csv, rows, hash, WVSIM_VERSION);
    RunManifest manifest = make_manifest("sweep_alpha", hash, WVSIM_VERSION);
    emit(opt.out_path, csv.str(), manifest);
    std::cerr << "sweep rows: " << rows.size()
              << ", closed-form discrepancies: " << discrepancies << "\n";
    return tol_ok ? 0 : kExitFailure;
  }

  std::ostringstream os;
  os.precision(15);
  if (opt.alpha_deg) {
    print_roots_for_alpha(os, Angle::degrees(*opt.alpha_deg), opt.tol, tol_ok);
  } else {
    // Default (and --joint): the simultaneous solution of both conditions.
    const AngleSolution sol = cheshire_solution();
    os << "joint interference solution\n";
    os << "  alpha = " << sol.alpha.deg() << " deg  (" << sol.alpha.rad()
       << " rad)\n";
    os << "  phi   = " << sol.phi.deg() << " deg  (" << sol.phi.rad()
       << " rad)\n";
    os << "  |condition1| = " << std::abs(sol.residuals.c1) << "\n";
    os << "  |condition2| = " << std::abs(sol.residuals.c2) << "\n";
    tol_ok = std::abs(sol.residuals.c1) < opt.tol &&
             std::abs(sol.residuals.c2) < opt.tol;
    const Angle closed = phi_closed_form(sol.alpha, 0);
    os << "  closed-form phi (n=0) = " << closed.deg()
       << " deg   |condition1| = "
       << std::abs(residual_condition1(sol.alpha, closed)) << "\n";
    os << "  gamma roots (J_gamma invisible on path A):\n";
    const SpinState pre = basis_state(Angle::radians(0.0), 0);
    const SpinState post = basis_state(sol.phi, +1);
    for (const Angle& gamma : solve_gamma(sol.alpha, sol.phi)) {
      const double cc =
          std::abs(residual_cheshire(sol.alpha, sol.phi, gamma));
      const WeakValue jw = weak_value(pre, post, j_component(gamma));
      os << "    gamma = " << gamma.deg() << " deg   |residual| = " << cc
         << "   <J_gamma>_w = " << jw.value.real() << "\n";
      tol_ok = tol_ok && cc < opt.tol;
    }
    os << "  postselection_probability = "
       << std::norm(overlap(post, pre)) << "\n";
  }
  if (opt.out_path) {
    wvsim::write_file_atomic(*opt.out_path, os.str());
  } else {
    std::cout << os.str();
  }
  return tol_ok ? 0 : kExitFailure;
}

int run_scenario_command(const ScenarioOptions& opt,
                         wvsim::ScenarioType expected) {
  using namespace wvsim;
  const ParsedScenario parsed = load_scenario(opt.config_path);
  if (parsed.scenario.type != expected) {
    throw ConfigError(std::string("config describes a ") +
                      to_string(parsed.scenario.type) + " scenario, not " +
                      to_string(expected));
  }
  const Report report = run_scenario(parsed.scenario);
  print_scenario_report(std::cout, report);

  if (expected == ScenarioType::cheshire) {
    const double p0 =
        epsilon_rotation_probability(parsed.scenario, ProbeLocation::C0, 0.0);
    std::vector<EpsilonRow> rows;
    for (const EpsilonProbeResponse& row :
         epsilon_rotation_scan(parsed.scenario, opt.eps)) {
      rows.push_back(EpsilonRow{to_string(row.location), row.probability,
                                row.rel_change, row.first_order_change});
    }
    print_epsilon_report(std::cout, opt.eps, p0, rows);
  }

  RunManifest manifest =
      make_manifest(to_string(report.type), parsed.hash, WVSIM_VERSION);
  if (opt.out_path) {
    std::ostringstream csv;
    write_report_csv(csv, report, parsed.hash, WVSIM_VERSION);
    write_file_atomic(*opt.out_path, csv.str());
    manifest.output_paths.push_back(*opt.out_path);
  }
  print_manifest(std::cerr, manifest);

  bool ok = std::abs(report.residual_c1) < opt.tol;
  if (expected == ScenarioType::three_box) {
    ok = ok && std::abs(report.residual_c2) < opt.tol;
  } else if (report.residual_cc) {
    ok = ok && std::abs(*report.residual_cc) < opt.tol;
  }
  return ok ? 0 : kExitFailure;
}

int cmd_meter(const MeterOptions& opt) {
  using namespace wvsim;
  const ParsedScenario parsed = load_scenario(opt.config_path);
  const ScenarioConfig& config = parsed.scenario;

  Observable obs = [&]() -> Observable {
    if (opt.obs == "pi_a") return spin_projector(config.alpha, +1);
    if (opt.obs == "pi_b") return spin_projector(config.alpha, 0);
    if (opt.obs == "pi_c") return spin_projector(config.alpha, -1);
    if (opt.obs == "pi_abar") {
      return Observable(SpinMatrix(SpinMatrix::Identity() -
                                   spin_projector(config.alpha, +1).mat()));
    }
    if (opt.obs == "pi_bbar") {
      return Observable(SpinMatrix(SpinMatrix::Identity() -
                                   spin_projector(config.alpha, 0).mat()));
    }
    if (opt.obs == "j_gamma") return j_gamma(config);
    if (opt.obs == "identity") return Observable(SpinMatrix::Identity());
    throw ConfigError("unknown observable '" + opt.obs +
                      "' (pi_a, pi_abar, pi_b, pi_bbar, pi_c, j_gamma, "
                      "identity)");
  }();

  std::vector<double> gs = opt.g_list;
  std::sort(gs.begin(), gs.end(), std::greater<double>());
  const ConvergenceReport report = weak_limit_report(
      pre_state(config), post_state(config), obs, gs, parsed.meter.sigma,
      parsed.meter.grid_points, parsed.meter.half_extent_sigmas);

  std::ostringstream csv;
  write_convergence_csv(csv, report, opt.obs, parsed.hash, WVSIM_VERSION);
  RunManifest manifest =
      make_manifest("meter_convergence", parsed.hash, WVSIM_VERSION);
  std::optional<std::string> out = opt.out_path;
  emit(out, csv.str(), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-value simulator for pre/post-selected spin-1 "
               "interferometers"};
  app.set_version_flag("--version", std::string("wvsim ") + WVSIM_VERSION);
  int seed = 0;
  app.add_option("--seed", seed, "Reserved for future stochastic extensions");

  SolveAnglesOptions solve_opt;
  auto* solve = app.add_subcommand(
      "solve-angles", "Solve the destructive-interference angle conditions");
  solve->add_flag("--joint", solve_opt.joint,
                  "Report the simultaneous solution of both conditions");
  solve->add_option("--alpha", solve_opt.alpha_deg,
                    "Fixed alpha in degrees; reports all phi roots");
  solve->add_option("--sweep", solve_opt.sweep,
                    "Alpha sweep START:STOP:STEP in degrees, CSV output");
  solve->add_option("--config", solve_opt.config_path,
                    "Config file with a [sweep] section");
  solve->add_option("--out", solve_opt.out_path, "Output path");
  solve->add_option("--tol", solve_opt.tol, "Residual tolerance gate");

  ScenarioOptions tb_opt;
  auto* three_box = app.add_subcommand(
      "three-box", "Weak-value table for the three-path scenario");
  three_box->add_option("--config", tb_opt.config_path, "Scenario config")
      ->required();
  three_box->add_option("--out", tb_opt.out_path, "CSV output path");
  three_box->add_option("--tol", tb_opt.tol, "Residual tolerance gate");

  ScenarioOptions cc_opt;
  auto* cheshire = app.add_subcommand(
      "cheshire", "Weak-value table for the separated-spin scenario");
  cheshire->add_option("--config", cc_opt.config_path, "Scenario config")
      ->required();
  cheshire->add_option("--out", cc_opt.out_path, "CSV output path");
  cheshire->add_option("--tol", cc_opt.tol, "Residual tolerance gate");
  cheshire->add_option("--eps", cc_opt.eps, "Weak rotation angle");

  MeterOptions meter_opt;
  auto* meter = app.add_subcommand(
      "meter-sim", "Pointer-shift convergence toward the weak value");
  meter->add_option("--config", meter_opt.config_path, "Scenario config")
      ->required();
  meter->add_option("--g", meter_opt.g_list,
                    "Coupling strengths (descending)")
      ->delimiter(',');
  meter->add_option("--obs", meter_opt.obs,
                    "Observable: pi_a, pi_abar, pi_b, pi_bbar, pi_c, "
                    "j_gamma, identity");
  meter->add_option("--out", meter_opt.out_path, "CSV output path");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve_angles(solve_opt);
    if (three_box->parsed())
      return run_scenario_command(tb_opt, wvsim::ScenarioType::three_box);
    if (cheshire->parsed())
      return run_scenario_command(cc_opt, wvsim::ScenarioType::cheshire);
    if (meter->parsed()) return cmd_meter(meter_opt);
  } catch (const wvsim::OrthogonalPrePost& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPhysical;
  } catch (const wvsim::PostselectionImpossible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPhysical;
  } catch (const wvsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
