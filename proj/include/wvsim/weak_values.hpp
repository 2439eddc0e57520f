#pragma once

#include "wvsim/spin_algebra.hpp"

namespace wvsim {

/// Below this post-selection amplitude magnitude the weak value is treated
/// as undefined (misconfigured scenario, not a physical regime).
inline constexpr double kOrthogonalityTol = 1e-10;

/// A weak value together with the post-selection amplitude <post|pre> it was
/// normalized by, so callers can report the post-selection probability.
struct WeakValue {
  Complex value;
  Complex postselection_amp;

  double postselection_probability() const {
    return std::norm(postselection_amp);
  }
};

/// <post|op|pre> / <post|pre>. Throws OrthogonalPrePost when the denominator
/// magnitude falls below tol_orth. The raw-matrix overload admits
/// non-Hermitian composites such as J_gamma * Pi_A.
WeakValue weak_value(const SpinState& pre, const SpinState& post,
                     const SpinMatrix& op, double tol_orth = kOrthogonalityTol);
WeakValue weak_value(const SpinState& pre, const SpinState& post,
                     const Observable& obs,
                     double tol_orth = kOrthogonalityTol);

/// Rank-1 projector |m_theta><m_theta| onto the J_theta eigenstate.
Observable spin_projector(Angle theta, int m);

}  // namespace wvsim
