#include "wvsim/meter.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wvsim/errors.hpp"
#include "wvsim/weak_values.hpp"

namespace wvsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPostselectFloor = 1e-14;

/// Samples of a unit-normalized Gaussian of width sigma at center c,
/// renormalized to exact discrete norm 1 on the grid.
Eigen::VectorXcd sampled_gaussian(const MeterGrid& grid, double sigma,
                                  double c) {
  Eigen::VectorXcd amps(grid.n);
  const double prefactor = std::pow(kPi * sigma * sigma, -0.25);
  for (int i = 0; i < grid.n; ++i) {
    const double u = grid.x(i) - c;
    amps(i) = prefactor * std::exp(-u * u / (2.0 * sigma * sigma));
  }
  const double norm = std::sqrt(amps.squaredNorm() * grid.dx);
  amps /= norm;
  return amps;
}

}  // namespace

MeterState MeterState::gaussian(double sigma, double center, int n,
                                double half_extent_sigmas) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("meter sigma must be positive");
  }
  if (n < 16) {
    throw std::invalid_argument("meter grid needs at least 16 points");
  }
  MeterGrid grid;
  grid.n = n;
  const double half = half_extent_sigmas * sigma;
  grid.x0 = center - half;
  grid.dx = 2.0 * half / n;
  return MeterState(grid, sampled_gaussian(grid, sigma, center), sigma, center,
                    true);
}

MeterState::MeterState(MeterGrid grid, Eigen::VectorXcd amps, double sigma,
                       double center, bool is_initial_gaussian)
    : grid_(grid),
      amps_(std::move(amps)),
      sigma_(sigma),
      center_(center),
      is_initial_gaussian_(is_initial_gaussian) {}

double MeterState::norm_squared() const {
  return amps_.squaredNorm() * grid_.dx;
}

double JointState::norm_squared() const {
  double sum = 0.0;
  for (const auto& c : component) {
    sum += c.squaredNorm();
  }
  return sum * grid.dx;
}

JointState couple(const SpinState& system, const MeterState& meter,
                  const Observable& obs, double g) {
  if (!std::isfinite(g)) {
    throw std::invalid_argument("coupling strength must be finite");
  }
  if (!meter.is_initial_gaussian()) {
    throw std::invalid_argument(
        "couple expects the initial Gaussian meter state");
  }
  Eigen::SelfAdjointEigenSolver<SpinMatrix> es(obs.mat());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("observable eigendecomposition failed");
  }
  const double max_shift =
      std::abs(g) * es.eigenvalues().cwiseAbs().maxCoeff();
  const MeterGrid& grid = meter.grid();
  const double margin = 8.0 * meter.sigma();
  if (meter.center() + max_shift + margin > grid.x_max() ||
      meter.center() - max_shift - margin < grid.x_min()) {
    throw ConfigError("meter grid too small for shift " +
                      std::to_string(max_shift) + " with an 8 sigma margin");
  }

  JointState joint;
  joint.grid = grid;
  joint.sigma = meter.sigma();
  for (auto& c : joint.component) {
    c = Eigen::VectorXcd::Zero(grid.n);
  }
  // Each eigencomponent |v_j> carries a Gaussian translated by g*lambda_j.
  for (int j = 0; j < 3; ++j) {
    const Complex cj = es.eigenvectors().col(j).dot(system.amps());
    if (std::abs(cj) == 0.0) continue;
    const Eigen::VectorXcd shifted = sampled_gaussian(
        grid, meter.sigma(), meter.center() + g * es.eigenvalues()(j));
    for (int m = 0; m < 3; ++m) {
      joint.component[m] += es.eigenvectors()(m, j) * cj * shifted;
    }
  }
  return joint;
}

PostselectResult postselect(const JointState& joint, const SpinState& post) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(joint.grid.n);
  for (int m = 0; m < 3; ++m) {
    amps += std::conj(post.amps()(m)) * joint.component[m];
  }
  const double probability = amps.squaredNorm() * joint.grid.dx;
  if (probability < kPostselectFloor) {
    throw PostselectionImpossible(probability);
  }
  amps /= std::sqrt(probability);
  return PostselectResult{
      MeterState(joint.grid, std::move(amps), joint.sigma, 0.0, false),
      probability};
}

double pointer_mean(const MeterState& meter) {
  double sum = 0.0;
  for (int i = 0; i < meter.grid().n; ++i) {
    sum += meter.grid().x(i) * std::norm(meter.amps()(i));
  }
  return sum * meter.grid().dx;
}

ConvergenceReport weak_limit_report(const SpinState& system,
                                    const SpinState& post,
                                    const Observable& obs,
                                    std::span<const double> g_list,
                                    double sigma, int grid_points,
                                    double half_extent_sigmas) {
  for (std::size_t i = 1; i < g_list.size(); ++i) {
    if (!(g_list[i] < g_list[i - 1])) {
      throw std::invalid_argument("g_list must be sorted descending");
    }
  }
  ConvergenceReport report;
  report.target = weak_value(system, post, obs).value.real();

  for (double g : g_list) {
    const MeterState meter =
        MeterState::gaussian(sigma, 0.0, grid_points, half_extent_sigmas);
    const PostselectResult sel = postselect(couple(system, meter, obs, g), post);
    const double ratio = pointer_mean(sel.meter) / g;
    report.rows.push_back(
        ConvergenceRow{g, ratio, report.target,
                       std::abs(ratio - report.target)});
  }

  report.monotone = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].abs_error >
        report.rows[i - 1].abs_error + report.noise_floor) {
      report.monotone = false;
    }
  }

  // Leading-order fit over rows above the noise floor.
  std::vector<double> lg, le;
  for (const auto& row : report.rows) {
    if (row.abs_error > report.noise_floor) {
      lg.push_back(std::log(row.g));
      le.push_back(std::log(row.abs_error));
    }
  }
  if (lg.size() >= 2) {
    double mg = 0.0, me = 0.0;
    for (std::size_t i = 0; i < lg.size(); ++i) {
      mg += lg[i];
      me += le[i];
    }
    mg /= lg.size();
    me /= le.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lg.size(); ++i) {
      num += (lg[i] - mg) * (le[i] - me);
      den += (lg[i] - mg) * (lg[i] - mg);
    }
    report.fitted_order = num / den;
  } else {
    report.fitted_order = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

double epsilon_rotation_probability(const ScenarioConfig& config,
                                    ProbeLocation location, double eps) {
  validate(config);
  if (location != ProbeLocation::C0 && location != ProbeLocation::C2 &&
      location != ProbeLocation::C3 && location != ProbeLocation::C5) {
    throw ConfigError("epsilon rotation insertion points are C0/C2/C3/C5");
  }
  const SpinMatrix rot = evolution_operator(j_gamma(config), eps);
  const SpinState post = post_state(config);

  BranchState beam = prepare(config);
  if (location == ProbeLocation::C0) {
    // Rotation of the undivided beam before the splitter.
    Branch rotated = beam.branches().front();
    rotated.spin = SpinState(SpinVector(rot * rotated.spin.amps()));
    beam = BranchState(Stage::prepared, {rotated});
  }
  const BranchState probed = recombine(
      split(beam, config.alpha, config.branch_phase_rad), RecombineScope::bc);

  Complex amp = 0.0;
  for (const Branch& b : probed.branches()) {
    const bool rotate_branch =
        (location == ProbeLocation::C3 && b.path == PathLabel::A) ||
        (location == ProbeLocation::C2 && b.path != PathLabel::A) ||
        location == ProbeLocation::C5;  // rotation after full recombination
    const SpinVector spin = rotate_branch ? SpinVector(rot * b.spin.amps())
                                          : b.spin.amps();
    amp += b.amp * post.amps().dot(spin);
  }
  return std::norm(amp);
}

std::vector<EpsilonProbeResponse> epsilon_rotation_scan(
    const ScenarioConfig& config, double eps) {
  const double p0 =
      epsilon_rotation_probability(config, ProbeLocation::C0, 0.0);
  std::vector<EpsilonProbeResponse> rows;
  for (ProbeLocation loc : {ProbeLocation::C3, ProbeLocation::C2,
                            ProbeLocation::C0, ProbeLocation::C5}) {
    const double p = epsilon_rotation_probability(config, loc, eps);
    const double pm = epsilon_rotation_probability(config, loc, -eps);
    rows.push_back(EpsilonProbeResponse{loc, p, (p - p0) / p0,
                                        (p - pm) / (2.0 * eps)});
  }
  return rows;
}

}  // namespace wvsim
