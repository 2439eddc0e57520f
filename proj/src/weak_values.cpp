#include "wvsim/weak_values.hpp"

#include "wvsim/errors.hpp"

namespace wvsim {

WeakValue weak_value(const SpinState& pre, const SpinState& post,
                     const SpinMatrix& op, double tol_orth) {
  const Complex den = overlap(post, pre);
  if (std::abs(den) < tol_orth) {
    throw OrthogonalPrePost(std::abs(den));
  }
  const Complex num = post.amps().dot(op * pre.amps());
  return WeakValue{num / den, den};
}

WeakValue weak_value(const SpinState& pre, const SpinState& post,
                     const Observable& obs, double tol_orth) {
  return weak_value(pre, post, obs.mat(), tol_orth);
}

Observable spin_projector(Angle theta, int m) {
  const SpinVector v = basis_state(theta, m).amps();
  return Observable(v * v.adjoint());
}

}  // namespace wvsim
