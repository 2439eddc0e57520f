#include "wvsim/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wvsim/errors.hpp"
#include "wvsim/weak_values.hpp"

namespace wvsim {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr int kGridIntervals = 2000;
constexpr double kBisectTol = 1e-13;
constexpr double kMergeTol = 1e-9;

SpinState default_pre() { return basis_state(Angle::radians(0.0), 0); }
SpinState default_post(Angle phi) { return basis_state(phi, +1); }

/// Roots of f on [0, 2*pi): sign-bracketing on a uniform grid, bisection to
/// kBisectTol, duplicates merged modulo 2*pi.
std::vector<double> find_roots(const std::function<double(double)>& f) {
  std::vector<double> roots;
  const double h = kTwoPi / kGridIntervals;
  double x_prev = 0.0;
  double f_prev = f(x_prev);
  for (int i = 1; i <= kGridIntervals; ++i) {
    const double x = i * h;
    const double fx = f(x);
    if (f_prev == 0.0) {
      roots.push_back(x_prev);
    } else if (f_prev * fx < 0.0) {
      double lo = x_prev, hi = x, flo = f_prev;
      while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fmid < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fmid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    f_prev = fx;
  }

  for (double& r : roots) {
    r = std::fmod(r, kTwoPi);
    if (r < 0.0) r += kTwoPi;
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    const bool dup =
        !merged.empty() &&
        (r - merged.back() < kMergeTol ||
         (kTwoPi - r) + merged.front() < kMergeTol);  // wrap-around duplicate
    if (!dup) merged.push_back(r);
  }
  return merged;
}

}  // namespace

Complex residual_condition1(Angle alpha, Angle phi) {
  const SpinState mi = default_pre();
  const SpinState mf = default_post(phi);
  Complex sum = 0.0;
  for (int k : {-1, 0}) {
    const SpinState mk = basis_state(alpha, k);
    sum += overlap(mf, mk) * overlap(mk, mi);
  }
  return sum;
}

Complex residual_condition2(Angle alpha, Angle phi) {
  const SpinState mi = default_pre();
  const SpinState mf = default_post(phi);
  Complex sum = 0.0;
  for (int k : {-1, +1}) {
    const SpinState mk = basis_state(alpha, k);
    sum += overlap(mf, mk) * overlap(mk, mi);
  }
  return sum;
}

Angle phi_closed_form(Angle alpha, int n) {
  const double quarter = 0.25 * alpha.rad();
  const double t = std::tan(quarter);
  const double sec = 1.0 / std::cos(quarter);
  const double den = std::pow(t * t - 1.0, 3);
  if (!std::isfinite(t) || !std::isfinite(sec) || std::abs(den) < 1e-12) {
    throw SingularAlpha(alpha.rad());
  }
  const double num =
      8.0 * std::pow(t, 3) -
      std::sqrt(3.0 * std::cos(2.0 * alpha.rad()) + 5.0) * std::pow(sec, 6) /
          (2.0 * std::sqrt(2.0));
  if (!std::isfinite(num)) {
    throw SingularAlpha(alpha.rad());
  }
  const double phi = 4.0 * std::atan(num / den) + 4.0 * 3.14159265358979323846 * n;
  return Angle::radians(phi);
}

std::vector<Angle> solve_phi(Angle alpha) {
  const auto f = [alpha](double phi) {
    return residual_condition1(alpha, Angle::radians(phi)).real();
  };
  std::vector<Angle> out;
  for (double r : find_roots(f)) {
    out.push_back(Angle::radians(r));
  }
  return out;
}

AngleSolution joint_solution() {
  const double alpha = 2.0 * std::acos(std::sqrt(0.5 + std::sqrt(5.0) / 10.0));
  const double phi = 2.0 * std::acos(std::sqrt(0.5 - 1.0 / std::sqrt(5.0)));
  AngleSolution sol;
  sol.alpha = Angle::radians(alpha);
  sol.phi = Angle::radians(phi);
  sol.residuals.c1 = residual_condition1(sol.alpha, sol.phi);
  sol.residuals.c2 = residual_condition2(sol.alpha, sol.phi);
  return sol;
}

Complex residual_cheshire(Angle alpha, Angle phi, Angle gamma) {
  const SpinState mf = default_post(phi);
  const SpinState ma = basis_state(alpha, +1);
  return mf.amps().dot(j_component(gamma).mat() * ma.amps());
}

std::vector<Angle> solve_gamma(Angle alpha, Angle phi) {
  const auto f = [alpha, phi](double gamma) {
    return residual_cheshire(alpha, phi, Angle::radians(gamma)).real();
  };
  std::vector<Angle> out;
  for (double r : find_roots(f)) {
    out.push_back(Angle::radians(r));
  }
  return out;
}

AngleSolution cheshire_solution() {
  AngleSolution sol = joint_solution();
  const auto gammas = solve_gamma(sol.alpha, sol.phi);
  if (gammas.empty()) {
    throw std::runtime_error("no gamma root found at the joint solution");
  }
  sol.gamma = gammas.front();
  sol.residuals.cc = residual_cheshire(sol.alpha, sol.phi, *sol.gamma);
  return sol;
}

std::vector<ClosedFormCheck> cross_validate_phi_closed_form(
    std::span<const double> alphas_rad, double tol) {
  std::vector<ClosedFormCheck> checks;
  checks.reserve(alphas_rad.size());
  for (double a : alphas_rad) {
    ClosedFormCheck check;
    check.alpha_rad = a;
    const Angle alpha = Angle::radians(a);
    double best = std::numeric_limits<double>::infinity();
    try {
      // Branches differ by 4*pi*n; the residual is 2*pi-periodic in phi, so
      // they re-check identically, but each printed branch is evaluated.
      for (int n : {-1, 0, 1}) {
        const Angle phi = phi_closed_form(alpha, n);
        const double res = std::abs(residual_condition1(alpha, phi));
        if (res < best) {
          best = res;
          check.phi_closed_rad = phi.rad();
          check.branch_n = n;
        }
      }
      check.residual_abs = best;
      check.matched = best < tol;
    } catch (const SingularAlpha&) {
      check.singular = true;
    }
    checks.push_back(check);
  }
  return checks;
}

}  // namespace wvsim
