#pragma once

#include <Eigen/Dense>
#include <complex>

#include "wvsim/angle.hpp"

namespace wvsim {

using Complex = std::complex<double>;
using SpinVector = Eigen::Vector3cd;
using SpinMatrix = Eigen::Matrix3cd;

/// Index of azimuthal number m in the fixed basis order (+1, 0, -1).
/// Throws std::domain_error for m outside {-1, 0, +1}.
int m_index(int m);

/// Normalized J = 1 spin state, amplitudes over m = (+1, 0, -1) in the
/// z-basis. Immutable value type.
class SpinState {
 public:
  /// Requires amps already normalized to 1 within 1e-12.
  explicit SpinState(const SpinVector& amps);

  /// Normalizes an arbitrary nonzero amplitude vector.
  static SpinState normalized(const SpinVector& amps);

  const SpinVector& amps() const { return amps_; }
  Complex amp(int m) const { return amps_(m_index(m)); }

 private:
  SpinVector amps_;
};

/// Hermitian operator on the J = 1 spin space (Hermitian within 1e-12,
/// validated at construction).
class Observable {
 public:
  explicit Observable(const SpinMatrix& mat);

  const SpinMatrix& mat() const { return mat_; }

 private:
  SpinMatrix mat_;
};

/// Generator of rotations of the quantization axis inside the fixed plane
/// (angular-momentum component normal to that plane). The representation is
/// chosen so that exp(-i theta J_g) is real: d-matrices come out real
/// orthogonal in the standard convention.
const SpinMatrix& rotation_generator();

/// Reduced rotation matrix d^1_{m',m}(theta) = <m'| exp(-i theta J_g) |m>,
/// rows/columns ordered (+1, 0, -1). Real orthogonal.
Eigen::Matrix3d wigner_d_small(Angle theta);

/// J_theta eigenstate |m_theta> with eigenvalue m, expressed in the z-basis.
SpinState basis_state(Angle theta, int m);

/// <a|b>, conjugate-linear in a.
Complex overlap(const SpinState& a, const SpinState& b);

/// Spin projection J_theta = R(theta) J_z R(theta)^dag along the axis at
/// angle theta from +z. Eigenvalues are exactly {+1, 0, -1}.
Observable j_component(Angle theta);

/// Rotation operator U(theta) = exp(-i theta J_g), computed by spectral
/// decomposition. Unitary; equals wigner_d_small under the fixed convention.
SpinMatrix rotation_operator(Angle theta);

/// exp(-i t obs) for Hermitian obs, by exact spectral decomposition.
SpinMatrix evolution_operator(const Observable& obs, double t);

}  // namespace wvsim
