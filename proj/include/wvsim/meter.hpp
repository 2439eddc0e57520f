#pragma once

#include <array>
#include <span>
#include <vector>

#include "wvsim/interferometer.hpp"
#include "wvsim/spin_algebra.hpp"

namespace wvsim {

/// Uniform 1D position grid with midpoint samples, symmetric about the
/// initial meter center.
struct MeterGrid {
  double x0 = 0.0;  // left edge
  double dx = 0.0;
  int n = 0;

  double x(int i) const { return x0 + (i + 0.5) * dx; }
  double x_min() const { return x0; }
  double x_max() const { return x0 + n * dx; }
};

/// Discretized 1D pointer wavefunction. The canonical initial state is a
/// Gaussian of width sigma; post-selected meters are generic superpositions.
class MeterState {
 public:
  /// Initial Gaussian pointer, discretely normalized on a grid spanning
  /// center +/- half_extent_sigmas * sigma.
  static MeterState gaussian(double sigma, double center = 0.0, int n = 4096,
                             double half_extent_sigmas = 12.0);

  MeterState(MeterGrid grid, Eigen::VectorXcd amps, double sigma,
             double center, bool is_initial_gaussian);

  const MeterGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& amps() const { return amps_; }
  double sigma() const { return sigma_; }
  double center() const { return center_; }
  bool is_initial_gaussian() const { return is_initial_gaussian_; }

  /// sum |amp|^2 dx.
  double norm_squared() const;

 private:
  MeterGrid grid_;
  Eigen::VectorXcd amps_;
  double sigma_;
  double center_;
  bool is_initial_gaussian_;
};

/// System (x) meter product space: one meter-sized complex field per spin
/// component in the z-basis.
struct JointState {
  MeterGrid grid;
  std::array<Eigen::VectorXcd, 3> component;
  double sigma = 1.0;

  double norm_squared() const;
};

/// Applies exp(-i g obs (x) P) exactly: the observable is spectrally
/// decomposed and each eigencomponent's Gaussian is translated by g*lambda
/// in closed form. Throws ConfigError when the grid cannot hold the shifted
/// packet with an 8 sigma margin, std::invalid_argument for a non-Gaussian
/// meter.
JointState couple(const SpinState& system, const MeterState& meter,
                  const Observable& obs, double g);

struct PostselectResult {
  MeterState meter;    // renormalized
  double probability;  // squared norm before renormalization
};

/// Projects the system side onto |post>. Throws PostselectionImpossible when
/// the retained mass is below 1e-14.
PostselectResult postselect(const JointState& joint, const SpinState& post);

/// sum x |amp(x)|^2 dx of a normalized meter.
double pointer_mean(const MeterState& meter);

struct ConvergenceRow {
  double g = 0.0;
  double shift_over_g = 0.0;
  double target = 0.0;  // Re of the weak value
  double abs_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double target = 0.0;
  /// Log-log slope of error vs g fitted over rows above the noise floor;
  /// NaN when fewer than two rows are usable.
  double fitted_order = 0.0;
  /// Errors non-increasing along decreasing g, within the noise floor.
  bool monotone = false;
  double noise_floor = 1e-12;
};

/// Couples, post-selects and reads the pointer for each g (sorted
/// descending), against the analytic weak value target.
ConvergenceReport weak_limit_report(const SpinState& system,
                                    const SpinState& post,
                                    const Observable& obs,
                                    std::span<const double> g_list,
                                    double sigma, int grid_points = 4096,
                                    double half_extent_sigmas = 12.0);

/// Post-selection probability with exp(-i J_gamma eps) inserted on the
/// branch carrying the probe: path A for C3, recombined B+C for C2, the
/// undivided beam for C0/C5.
double epsilon_rotation_probability(const ScenarioConfig& config,
                                    ProbeLocation location, double eps);

struct EpsilonProbeResponse {
  ProbeLocation location;
  double probability = 0.0;         // P(eps)
  double rel_change = 0.0;          // (P(eps) - P(0)) / P(0)
  double first_order_change = 0.0;  // central difference dP/deps at 0
};

/// Probability response of each insertion point to the same weak rotation.
std::vector<EpsilonProbeResponse> epsilon_rotation_scan(
    const ScenarioConfig& config, double eps);

}  // namespace wvsim
