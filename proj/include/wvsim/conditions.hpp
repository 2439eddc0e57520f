#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wvsim/spin_algebra.hpp"

namespace wvsim {

/// Residual magnitude below which a root returned by the solvers is valid.
inline constexpr double kRootResidualTol = 1e-10;

struct ConditionResiduals {
  Complex c1{0.0, 0.0};
  Complex c2{0.0, 0.0};
  Complex cc{0.0, 0.0};
};

/// A solved angle configuration with its re-evaluated residuals.
struct AngleSolution {
  Angle alpha;
  Angle phi;
  std::optional<Angle> gamma;
  int branch_n = 0;
  ConditionResiduals residuals;
};

/// Destructive-interference amplitude for the path group B+C:
/// sum over k in {-1, 0} of <m_f|m_alpha=k><m_alpha=k|m_i>, with
/// m_i = |m_z=0> and m_f = |m_phi=+1>. Vanishes when a probe on the
/// recombined B+C path sees nothing.
Complex residual_condition1(Angle alpha, Angle phi);

/// Same sum over k in {-1, +1} (path group A+C); vanishes when a probe on
/// the recombined A+C path sees nothing.
Complex residual_condition2(Angle alpha, Angle phi);

/// Closed-form solution family phi(alpha, n) of condition 1, built from
/// quarter-angle tangents; branches are shifted by 4*pi*n. Throws
/// SingularAlpha where the expression degenerates (denominator
/// (tan^2(alpha/4) - 1)^3 within 1e-12 of zero, or non-finite intermediates).
Angle phi_closed_form(Angle alpha, int n);

/// All roots phi in [0, 2*pi) of residual_condition1(alpha, .), found by
/// sign-bracketing on a 2000-point grid plus bisection to 1e-13. Duplicates
/// within 1e-9 are merged. May be empty.
std::vector<Angle> solve_phi(Angle alpha);

/// The simultaneous solution of conditions 1 and 2:
/// alpha = 2 acos(1/2 + sqrt(5)/10)^(1/2), phi = 2 acos(1/2 - 1/sqrt(5))^(1/2).
AngleSolution joint_solution();

/// <m_f| J_gamma |m_alpha=+1> with m_f = |m_phi=+1>; vanishing makes the
/// spin projection along gamma undetectable on path A.
Complex residual_cheshire(Angle alpha, Angle phi, Angle gamma);

/// All roots gamma in [0, 2*pi) of residual_cheshire(alpha, phi, .), same
/// bracketing/bisection scheme as solve_phi.
std::vector<Angle> solve_gamma(Angle alpha, Angle phi);

/// joint_solution() extended with the smallest gamma root and the
/// corresponding residual.
AngleSolution cheshire_solution();

/// One closed-form cross-validation sample: the closed form evaluated at
/// alpha (branch n giving the smallest residual) against the
/// residual_condition1 oracle.
struct ClosedFormCheck {
  double alpha_rad = 0.0;
  bool singular = false;      // closed form undefined here; skipped
  double phi_closed_rad = 0.0;
  int branch_n = 0;
  double residual_abs = 0.0;
  bool matched = false;       // residual_abs below tolerance
};

/// Evaluates phi_closed_form over the alpha samples and re-checks each value
/// against residual_condition1. Samples that neither match within tol nor
/// hit a singularity are reported with matched = false so callers can log
/// the discrepancy; nothing is silently dropped.
std::vector<ClosedFormCheck> cross_validate_phi_closed_form(
    std::span<const double> alphas_rad, double tol = 1e-8);

}  // namespace wvsim
