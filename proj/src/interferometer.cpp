#include "wvsim/interferometer.hpp"

#include <cmath>
#include <utility>

#include "wvsim/conditions.hpp"
#include "wvsim/errors.hpp"

namespace wvsim {

namespace {

constexpr double kNormTol = 1e-12;

int path_index(PathLabel p) { return static_cast<int>(p); }

int m_of_path(PathLabel p) {
  switch (p) {
    case PathLabel::A: return +1;
    case PathLabel::B: return 0;
    case PathLabel::C: return -1;
  }
  return 0;
}

bool is_three_box_probe(ProbeLocation loc) {
  return loc == ProbeLocation::D2 || loc == ProbeLocation::D3 ||
         loc == ProbeLocation::D4;
}

const char* time_label(ProbeLocation loc) {
  switch (loc) {
    case ProbeLocation::D2: return "t2";
    case ProbeLocation::D3: return "t3";
    case ProbeLocation::D4: return "t4";
    case ProbeLocation::C0: return "t0";
    case ProbeLocation::C2: return "t2";
    case ProbeLocation::C3: return "t3";
    case ProbeLocation::C5: return "t5";
  }
  return "?";
}

struct PipelineAmps {
  // Branch transition amplitudes amp_k * <post|spin_k> indexed by path, the
  // post-selection amplitude, and the branch state at the probing stage.
  std::array<Complex, 3> to_post;
  Complex postselection;
  BranchState state;
};

/// Runs prepare -> split -> recombine(BC) and collects the per-path
/// transition amplitudes toward the post-selected state.
PipelineAmps pipeline(const ScenarioConfig& config) {
  BranchState probed =
      recombine(split(prepare(config), config.alpha, config.branch_phase_rad),
                RecombineScope::bc);
  const SpinState post = post_state(config);
  std::array<Complex, 3> to_post{};
  for (const Branch& b : probed.branches()) {
    to_post[path_index(b.path)] = b.amp * overlap(post, b.spin);
  }
  const BranchState closed = recombine(probed, RecombineScope::all);
  const Complex den = postselect_amplitude(closed, post);
  return PipelineAmps{to_post, den, std::move(probed)};
}

Complex require_nonorthogonal(const PipelineAmps& amps, double tol) {
  if (std::abs(amps.postselection) < tol) {
    throw OrthogonalPrePost(std::abs(amps.postselection));
  }
  return amps.postselection;
}

/// Spatial factor applied to path-localized probes: 1 in ideal mode, the
/// squared window/packet overlap (project onto the window, then re-overlap
/// with the outgoing mode) in Gaussian mode.
double window_factor(const ScenarioConfig& config,
                     const WavepacketGaussian& packet) {
  if (!config.window) return 1.0;
  const double ov = packet_overlap(*config.window, packet);
  return ov * ov;
}

WeakValue group_weak_value(const ScenarioConfig& config,
                           const PipelineAmps& amps,
                           std::initializer_list<PathLabel> group,
                           const WavepacketGaussian& packet) {
  const Complex den = require_nonorthogonal(amps, config.tol_orth);
  Complex num = 0.0;
  for (PathLabel p : group) {
    num += amps.to_post[path_index(p)];
  }
  return WeakValue{num * window_factor(config, packet) / den, den};
}

WeakValue j_gamma_group_weak_value(const ScenarioConfig& config,
                                   const PipelineAmps& amps,
                                   std::initializer_list<PathLabel> group,
                                   const WavepacketGaussian& packet) {
  const Complex den = require_nonorthogonal(amps, config.tol_orth);
  const SpinMatrix jg = j_gamma(config).mat();
  const SpinState post = post_state(config);
  Complex num = 0.0;
  for (PathLabel p : group) {
    const Branch& b = amps.state.branch(p);
    num += b.amp * post.amps().dot(jg * b.spin.amps());
  }
  return WeakValue{num * window_factor(config, packet) / den, den};
}

}  // namespace

double packet_overlap(const WavepacketGaussian& a,
                      const WavepacketGaussian& b) {
  const double ws = a.width * a.width + b.width * b.width;
  const double dc = a.center - b.center;
  return std::sqrt(2.0 * a.width * b.width / ws) * std::exp(-dc * dc / (2.0 * ws));
}

const char* to_string(PathLabel p) {
  switch (p) {
    case PathLabel::A: return "A";
    case PathLabel::B: return "B";
    case PathLabel::C: return "C";
  }
  return "?";
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::prepared: return "prepared";
    case Stage::split: return "split";
    case Stage::bc_recombined: return "BC_recombined";
    case Stage::fully_recombined: return "fully_recombined";
  }
  return "?";
}

const char* to_string(ScenarioType t) {
  switch (t) {
    case ScenarioType::three_box: return "three_box";
    case ScenarioType::cheshire: return "cheshire";
  }
  return "?";
}

const char* to_string(ProbeLocation loc) {
  switch (loc) {
    case ProbeLocation::D2: return "D2";
    case ProbeLocation::D3: return "D3";
    case ProbeLocation::D4: return "D4";
    case ProbeLocation::C0: return "C0";
    case ProbeLocation::C2: return "C2";
    case ProbeLocation::C3: return "C3";
    case ProbeLocation::C5: return "C5";
  }
  return "?";
}

const char* to_string(ObservableKind k) {
  switch (k) {
    case ObservableKind::path_projector: return "path_projector";
    case ObservableKind::spin_j_gamma: return "spin_j_gamma";
    case ObservableKind::combined: return "combined";
  }
  return "?";
}

BranchState::BranchState(Stage stage, std::vector<Branch> branches)
    : stage_(stage), branches_(std::move(branches)) {
  const double n = norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw StateError("branch state norm " + std::to_string(n) +
                     " deviates from 1");
  }
}

const Branch& BranchState::branch(PathLabel p) const {
  for (const Branch& b : branches_) {
    if (b.path == p) return b;
  }
  throw StateError(std::string("no branch on path ") + to_string(p));
}

double BranchState::norm() const {
  double sum = 0.0;
  for (const Branch& b : branches_) {
    sum += std::norm(b.amp) * b.spin.amps().squaredNorm();
  }
  return sum;
}

bool BranchState::same_mode(PathLabel a, PathLabel b) const {
  if (a == b) return true;
  switch (stage_) {
    case Stage::prepared:
    case Stage::split:
      return false;
    case Stage::bc_recombined:
      return a != PathLabel::A && b != PathLabel::A;
    case Stage::fully_recombined:
      return true;
  }
  return false;
}

ScenarioConfig ScenarioConfig::three_box_default() {
  const AngleSolution sol = joint_solution();
  ScenarioConfig config;
  config.type = ScenarioType::three_box;
  config.alpha = sol.alpha;
  config.phi = sol.phi;
  config.probes = {{ProbeLocation::D3, ObservableKind::path_projector},
                   {ProbeLocation::D2, ObservableKind::path_projector},
                   {ProbeLocation::D4, ObservableKind::path_projector}};
  return config;
}

ScenarioConfig ScenarioConfig::cheshire_default() {
  const AngleSolution sol = cheshire_solution();
  ScenarioConfig config;
  config.type = ScenarioType::cheshire;
  config.alpha = sol.alpha;
  config.phi = sol.phi;
  config.gamma = sol.gamma;
  config.probes = {{ProbeLocation::C0, ObservableKind::spin_j_gamma},
                   {ProbeLocation::C2, ObservableKind::combined},
                   {ProbeLocation::C3, ObservableKind::combined},
                   {ProbeLocation::C5, ObservableKind::spin_j_gamma}};
  return config;
}

void validate(const ScenarioConfig& config) {
  m_index(config.preselect.m);
  if (config.postselect) m_index(config.postselect->m);
  if (config.packet.width <= 0.0) {
    throw ConfigError("packet width must be positive");
  }
  if (config.window && config.window->width <= 0.0) {
    throw ConfigError("projector window width must be positive");
  }
  for (double phase : config.branch_phase_rad) {
    if (!std::isfinite(phase)) {
      throw ConfigError("branch phases must be finite");
    }
  }
  for (const Probe& probe : config.probes) {
    const bool d_loc = is_three_box_probe(probe.location);
    if (config.type == ScenarioType::three_box && !d_loc) {
      throw ConfigError(std::string("probe ") + to_string(probe.location) +
                        " is not a three-box location (use D2/D3/D4)");
    }
    if (config.type == ScenarioType::cheshire && d_loc) {
      throw ConfigError(std::string("probe ") + to_string(probe.location) +
                        " is not a Cheshire location (use C0/C2/C3/C5)");
    }
    if (d_loc && probe.kind != ObservableKind::path_projector) {
      throw ConfigError(std::string(to_string(probe.location)) +
                        " measures a path projector");
    }
    if ((probe.location == ProbeLocation::C0 ||
         probe.location == ProbeLocation::C5) &&
        probe.kind != ObservableKind::spin_j_gamma) {
      throw ConfigError(std::string(to_string(probe.location)) +
                        " measures J_gamma on the undivided beam");
    }
    if ((probe.location == ProbeLocation::C2 ||
         probe.location == ProbeLocation::C3) &&
        probe.kind != ObservableKind::combined) {
      throw ConfigError(std::string(to_string(probe.location)) +
                        " measures the combined J_gamma * path projector");
    }
  }
  if (config.type == ScenarioType::cheshire && !config.gamma) {
    throw ConfigError("Cheshire scenario requires gamma");
  }
}

SpinState pre_state(const ScenarioConfig& config) {
  return basis_state(config.preselect.axis, config.preselect.m);
}

SpinState post_state(const ScenarioConfig& config) {
  if (config.postselect) {
    return basis_state(config.postselect->axis, config.postselect->m);
  }
  return basis_state(config.phi, +1);
}

Observable j_gamma(const ScenarioConfig& config) {
  if (!config.gamma) {
    throw ConfigError("gamma is not set in this scenario");
  }
  return j_component(*config.gamma);
}

BranchState prepare(const ScenarioConfig& config) {
  validate(config);
  std::vector<Branch> branches;
  branches.push_back(
      Branch{PathLabel::B, Complex(1.0, 0.0), pre_state(config), config.packet});
  return BranchState(Stage::prepared, std::move(branches));
}

BranchState split(const BranchState& state, Angle alpha,
                  const std::array<double, 3>& phase_rad) {
  if (state.stage() != Stage::prepared) {
    throw StateError(std::string("split requires stage 'prepared', state is '") +
                     to_string(state.stage()) + "'");
  }
  const Branch& beam = state.branches().front();
  std::vector<Branch> branches;
  for (PathLabel p : {PathLabel::A, PathLabel::B, PathLabel::C}) {
    const int k = m_of_path(p);
    const SpinState spin_k = basis_state(alpha, k);
    const Complex phase =
        std::exp(Complex(0.0, phase_rad[path_index(p)]));
    const Complex amp = beam.amp * overlap(spin_k, beam.spin) * phase;
    branches.push_back(Branch{p, amp, spin_k, beam.packet});
  }
  return BranchState(Stage::split, std::move(branches));
}

BranchState recombine(const BranchState& state, RecombineScope which) {
  // Recombination merges spatial modes only; spin amplitudes and relative
  // phases are untouched.
  if (which == RecombineScope::bc) {
    if (state.stage() != Stage::split) {
      throw StateError("B+C recombination requires stage 'split'");
    }
    std::vector<Branch> branches = state.branches();
    const WavepacketGaussian shared =
        state.branch(PathLabel::B).packet;
    for (Branch& b : branches) {
      if (b.path != PathLabel::A) b.packet = shared;
    }
    return BranchState(Stage::bc_recombined, std::move(branches));
  }
  if (state.stage() != Stage::bc_recombined) {
    throw StateError("full recombination requires stage 'BC_recombined'");
  }
  std::vector<Branch> branches = state.branches();
  const WavepacketGaussian shared = state.branch(PathLabel::A).packet;
  for (Branch& b : branches) {
    b.packet = shared;
  }
  return BranchState(Stage::fully_recombined, std::move(branches));
}

Complex postselect_amplitude(const BranchState& state, const SpinState& post) {
  if (state.stage() != Stage::fully_recombined) {
    throw StateError("post-selection requires a fully recombined state");
  }
  Complex amp = 0.0;
  for (const Branch& b : state.branches()) {
    amp += b.amp * overlap(post, b.spin);
  }
  return amp;
}

WeakValue path_projector_weak_value(const ScenarioConfig& config,
                                    ProbeLocation probe) {
  validate(config);
  const PipelineAmps amps = pipeline(config);
  switch (probe) {
    case ProbeLocation::D3:
      return group_weak_value(config, amps, {PathLabel::A},
                              amps.state.branch(PathLabel::A).packet);
    case ProbeLocation::D4:
      return group_weak_value(config, amps, {PathLabel::B},
                              amps.state.branch(PathLabel::B).packet);
    case ProbeLocation::D2:
      return group_weak_value(config, amps, {PathLabel::B, PathLabel::C},
                              amps.state.branch(PathLabel::B).packet);
    default:
      throw ConfigError(std::string("probe ") + to_string(probe) +
                        " does not measure a path projector");
  }
}

WeakValue spin_weak_value_on_path(const ScenarioConfig& config,
                                  ProbeLocation probe) {
  validate(config);
  const SpinMatrix jg = j_gamma(config).mat();
  const PipelineAmps amps = pipeline(config);
  switch (probe) {
    case ProbeLocation::C0:
    case ProbeLocation::C5: {
      // Whole beam, before splitting (C0) or after full recombination (C5):
      // identical amplitudes because the interferometer closes losslessly.
      const Complex den = require_nonorthogonal(amps, config.tol_orth);
      const Complex num =
          post_state(config).amps().dot(jg * pre_state(config).amps());
      return WeakValue{num / den, den};
    }
    case ProbeLocation::C3:
      return j_gamma_group_weak_value(config, amps, {PathLabel::A},
                                      amps.state.branch(PathLabel::A).packet);
    case ProbeLocation::C2:
      return j_gamma_group_weak_value(config, amps,
                                      {PathLabel::B, PathLabel::C},
                                      amps.state.branch(PathLabel::B).packet);
    default:
      throw ConfigError(std::string("probe ") + to_string(probe) +
                        " does not measure a spin weak value");
  }
}

Report run_scenario(const ScenarioConfig& config) {
  validate(config);
  const PipelineAmps amps = pipeline(config);
  const Complex den = require_nonorthogonal(amps, config.tol_orth);

  Report report;
  report.type = config.type;
  report.alpha_rad = config.alpha.rad();
  report.phi_rad = config.phi.rad();
  if (config.gamma) report.gamma_rad = config.gamma->rad();
  report.postselection_amp = den;
  report.postselection_probability = std::norm(den);

  // The interference residuals generalize conditions 1 and 2 to the
  // configured pre/post states: numerators of Pi_Abar and Pi_Bbar.
  report.residual_c1 = amps.to_post[path_index(PathLabel::B)] +
                       amps.to_post[path_index(PathLabel::C)];
  report.residual_c2 = amps.to_post[path_index(PathLabel::A)] +
                       amps.to_post[path_index(PathLabel::C)];
  if (config.gamma) {
    const Branch& a = amps.state.branch(PathLabel::A);
    report.residual_cc =
        post_state(config).amps().dot(j_gamma(config).mat() * a.spin.amps());
  }

  const auto observable_name = [&](const Probe& p) -> std::string {
    switch (p.location) {
      case ProbeLocation::D3: return "Pi_A";
      case ProbeLocation::D2: return "Pi_Abar";
      case ProbeLocation::D4: return "Pi_B";
      case ProbeLocation::C0: return "J_gamma(t0)";
      case ProbeLocation::C5: return "J_gamma(t5)";
      case ProbeLocation::C2: return "J_gamma.Pi_Abar";
      case ProbeLocation::C3: return "J_gamma.Pi_A";
    }
    return "?";
  };

  for (const Probe& probe : config.probes) {
    const WeakValue wv =
        probe.kind == ObservableKind::path_projector
            ? path_projector_weak_value(config, probe.location)
            : spin_weak_value_on_path(config, probe.location);
    const bool path_local = probe.location != ProbeLocation::C0 &&
                            probe.location != ProbeLocation::C5;
    report.probes.push_back(ProbeResult{
        to_string(probe.location), time_label(probe.location),
        observable_name(probe), wv.value,
        path_local ? window_factor(config, config.packet) : 1.0});
  }

  if (config.type == ScenarioType::three_box) {
    const WeakValue bbar =
        group_weak_value(config, amps, {PathLabel::A, PathLabel::C},
                         amps.state.branch(PathLabel::B).packet);
    const WeakValue pc = group_weak_value(
        config, amps, {PathLabel::C}, amps.state.branch(PathLabel::C).packet);
    const double factor = window_factor(config, config.packet);
    report.derived.push_back(ProbeResult{"derived", "-", "Pi_Bbar",
                                         bbar.value, factor});
    report.derived.push_back(
        ProbeResult{"derived", "-", "Pi_C", pc.value, factor});
  } else {
    const WeakValue pa = group_weak_value(
        config, amps, {PathLabel::A}, amps.state.branch(PathLabel::A).packet);
    const WeakValue pabar =
        group_weak_value(config, amps, {PathLabel::B, PathLabel::C},
                         amps.state.branch(PathLabel::B).packet);
    const double factor = window_factor(config, config.packet);
    report.derived.push_back(
        ProbeResult{"derived", "-", "Pi_A", pa.value, factor});
    report.derived.push_back(
        ProbeResult{"derived", "-", "Pi_Abar", pabar.value, factor});
  }
  return report;
}

}  // namespace wvsim
