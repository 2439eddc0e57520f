#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wvsim/spin_algebra.hpp"
#include "wvsim/weak_values.hpp"

namespace wvsim {

/// Static Gaussian wavepacket along the beam, psi(x) ~ exp(-(x-c)^2/(2 w^2)),
/// unit-normalized. Spatial dynamics inside the splitter is not modeled;
/// packets only enter through overlap factors.
struct WavepacketGaussian {
  double center = 0.0;
  double width = 1.0;
};

/// <a|b> for two unit-normalized Gaussians (closed form; always in (0, 1]).
double packet_overlap(const WavepacketGaussian& a, const WavepacketGaussian& b);

enum class PathLabel { A, B, C };
enum class Stage { prepared, split, bc_recombined, fully_recombined };

const char* to_string(PathLabel p);
const char* to_string(Stage s);

/// One interferometer arm: path label, complex amplitude, the spin state
/// carried along that arm, and its spatial packet.
struct Branch {
  PathLabel path;
  Complex amp;
  SpinState spin;
  WavepacketGaussian packet;
};

/// Superposition of path branches. Branches on distinct paths are exactly
/// orthogonal spatial modes until the stage marks them recombined.
class BranchState {
 public:
  BranchState(Stage stage, std::vector<Branch> branches);

  Stage stage() const { return stage_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(PathLabel p) const;

  /// Total norm, sum over branches of |amp|^2 * <spin|spin>.
  double norm() const;

  /// Whether two paths currently share one spatial mode.
  bool same_mode(PathLabel a, PathLabel b) const;

 private:
  Stage stage_;
  std::vector<Branch> branches_;
};

enum class ScenarioType { three_box, cheshire };
enum class ProbeLocation { D2, D3, D4, C0, C2, C3, C5 };
enum class ObservableKind { path_projector, spin_j_gamma, combined };

const char* to_string(ScenarioType t);
const char* to_string(ProbeLocation loc);
const char* to_string(ObservableKind k);

struct Probe {
  ProbeLocation location;
  ObservableKind kind;
};

/// Eigenstate specification (quantization-axis angle, azimuthal number m).
struct AxisStateSpec {
  Angle axis;
  int m = 0;
};

struct ScenarioConfig {
  ScenarioType type = ScenarioType::three_box;
  Angle alpha;
  Angle phi;
  std::optional<Angle> gamma;
  AxisStateSpec preselect{Angle::radians(0.0), 0};
  /// Post-selected eigenstate; axis defaults to phi when unset.
  std::optional<AxisStateSpec> postselect;
  std::vector<Probe> probes;
  /// Gaussian projector window; unset means ideal projectors.
  std::optional<WavepacketGaussian> window;
  /// Spatial packet carried by the beam (and inherited by every branch).
  WavepacketGaussian packet{0.0, 1.0};
  /// Differential propagation phase per path (A, B, C), radians. Default 0:
  /// recombination preserves the phase differences set at splitting.
  std::array<double, 3> branch_phase_rad{0.0, 0.0, 0.0};
  double tol_orth = kOrthogonalityTol;

  /// Three-box scenario at the joint interference solution, ideal
  /// projectors, probes D3/D2/D4.
  static ScenarioConfig three_box_default();
  /// Cheshire scenario at the joint solution with the smallest gamma root,
  /// probes C0/C2/C3/C5.
  static ScenarioConfig cheshire_default();
};

/// Throws ConfigError for invalid m, probe placements inconsistent with the
/// scenario type, non-positive widths, or a missing gamma where required.
void validate(const ScenarioConfig& config);

SpinState pre_state(const ScenarioConfig& config);
SpinState post_state(const ScenarioConfig& config);

/// J_gamma for the configured gamma. Throws ConfigError when gamma is unset.
Observable j_gamma(const ScenarioConfig& config);

/// Single branch in the pre-selected spin state, unit amplitude.
BranchState prepare(const ScenarioConfig& config);

/// Splits on the J_alpha eigenbasis: amp_k = <m_alpha=k|m_i>, path map
/// k = +1 -> A, 0 -> B, -1 -> C. Requires stage == prepared. Optional
/// differential propagation phases (one per path) multiply the amplitudes.
BranchState split(const BranchState& state, Angle alpha,
                  const std::array<double, 3>& phase_rad = {0.0, 0.0, 0.0});

enum class RecombineScope { bc, all };

/// Merges spatial modes without touching spin amplitudes or phases. B+C must
/// be recombined before the full recombination.
BranchState recombine(const BranchState& state, RecombineScope which);

/// Post-selection amplitude <post|psi> of a fully recombined state.
Complex postselect_amplitude(const BranchState& state, const SpinState& post);

/// Weak value of the path projector group measured at the probe location
/// (D3: A; D4: B; D2: recombined B+C), computed from the branch amplitudes.
/// In Gaussian mode the value is multiplied by the window/packet overlap
/// squared (window projection followed by re-overlap with the outgoing mode).
WeakValue path_projector_weak_value(const ScenarioConfig& config,
                                    ProbeLocation probe);

/// Weak value of J_gamma at C0/C5 (whole beam), J_gamma Pi_Abar at C2
/// (recombined B+C) or J_gamma Pi_A at C3 (path A).
WeakValue spin_weak_value_on_path(const ScenarioConfig& config,
                                  ProbeLocation probe);

struct ProbeResult {
  std::string location;    // probe label, or "derived" for computed rows
  std::string time_label;  // nominal trigger time, traceability only
  std::string observable;
  Complex weak_value;
  double window_overlap = 1.0;  // spatial factor applied (1 in ideal mode)
};

struct Report {
  ScenarioType type = ScenarioType::three_box;
  double alpha_rad = 0.0;
  double phi_rad = 0.0;
  std::optional<double> gamma_rad;
  Complex postselection_amp;
  double postselection_probability = 0.0;
  Complex residual_c1;
  Complex residual_c2;
  std::optional<Complex> residual_cc;
  std::vector<ProbeResult> probes;   // rows for configured probes
  std::vector<ProbeResult> derived;  // complement/consistency rows
};

/// Runs the full pipeline and collects every probe weak value, the
/// post-selection probability and the residuals of the scenario's
/// interference conditions. Pure function of the config.
Report run_scenario(const ScenarioConfig& config);

}  // namespace wvsim
