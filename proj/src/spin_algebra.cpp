#include "wvsim/spin_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace wvsim {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

int m_index(int m) {
  switch (m) {
    case +1: return 0;
    case 0: return 1;
    case -1: return 2;
    default:
      throw std::domain_error("azimuthal number m must be -1, 0 or +1, got " +
                              std::to_string(m));
  }
}

SpinState::SpinState(const SpinVector& amps) : amps_(amps) {
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw std::invalid_argument("SpinState amplitudes not normalized (norm = " +
                                std::to_string(norm) + ")");
  }
}

SpinState SpinState::normalized(const SpinVector& amps) {
  const double norm = amps.norm();
  if (!(norm > 1e-15)) {
    throw std::invalid_argument("cannot normalize a (near-)zero spin vector");
  }
  return SpinState(SpinVector(amps / norm));
}

Observable::Observable(const SpinMatrix& mat) : mat_(mat) {
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw std::invalid_argument("Observable matrix is not Hermitian");
  }
}

const SpinMatrix& rotation_generator() {
  // Basis order (+1, 0, -1); purely imaginary entries so that
  // exp(-i theta J_g) is real orthogonal (Condon-Shortley phases).
  static const SpinMatrix jg = [] {
    SpinMatrix m = SpinMatrix::Zero();
    const Complex unit(0.0, kInvSqrt2);
    m(0, 1) = -unit;
    m(1, 0) = unit;
    m(1, 2) = -unit;
    m(2, 1) = unit;
    return m;
  }();
  return jg;
}

Eigen::Matrix3d wigner_d_small(Angle theta) {
  // d^1_{m',m}(theta) = <m'| exp(-i theta J_g) |m>, closed form.
  const double c = std::cos(theta.rad());
  const double s = std::sin(theta.rad());
  Eigen::Matrix3d d;
  d << 0.5 * (1.0 + c), -s * kInvSqrt2, 0.5 * (1.0 - c),
       s * kInvSqrt2,    c,             -s * kInvSqrt2,
       0.5 * (1.0 - c),  s * kInvSqrt2, 0.5 * (1.0 + c);
  return d;
}

SpinState basis_state(Angle theta, int m) {
  const Eigen::Matrix3d d = wigner_d_small(theta);
  return SpinState(d.col(m_index(m)).cast<Complex>());
}

Complex overlap(const SpinState& a, const SpinState& b) {
  return a.amps().dot(b.amps());
}

Observable j_component(Angle theta) {
  const Eigen::Matrix3d d = wigner_d_small(theta);
  const Eigen::Vector3d jz(1.0, 0.0, -1.0);
  const Eigen::Matrix3d m = d * jz.asDiagonal() * d.transpose();
  return Observable(m.cast<Complex>());
}

SpinMatrix evolution_operator(const Observable& obs, double t) {
  Eigen::SelfAdjointEigenSolver<SpinMatrix> es(obs.mat());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  SpinVector phases;
  for (int i = 0; i < 3; ++i) {
    phases(i) = std::exp(Complex(0.0, -t * es.eigenvalues()(i)));
  }
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

SpinMatrix rotation_operator(Angle theta) {
  return evolution_operator(Observable(rotation_generator()), theta.rad());
}

}  // namespace wvsim
