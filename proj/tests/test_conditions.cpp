#include <doctest.h>

#include <cmath>
#include <random>

#include "wvsim/conditions.hpp"
#include "wvsim/errors.hpp"
#include "wvsim/weak_values.hpp"
#include "oracles.hpp"

using namespace wvsim;

namespace {

const double kTol = 1e-12;

/// Brute-force residual through the series-oracle d-matrix:
/// sum_k <m_f|m_alpha=k><m_alpha=k|m_i> with m_i = |m_z=0>, m_f = |m_phi=+1>.
Complex oracle_residual(double alpha, double phi,
                        std::initializer_list<int> ks) {
  const auto col = [](int m) { return m == 1 ? 0 : (m == 0 ? 1 : 2); };
  const Eigen::Matrix3d d_alpha = oracle::wigner_d_series(alpha);
  const Eigen::Matrix3d d_phi = oracle::wigner_d_series(phi);
  const Eigen::Vector3d mi(0.0, 1.0, 0.0);
  const Eigen::Vector3d mf = d_phi.col(col(+1));
  Complex sum = 0.0;
  for (int k : ks) {
    const Eigen::Vector3d mk = d_alpha.col(col(k));
    sum += mf.dot(mk) * mk.dot(mi);
  }
  return sum;
}

double circular_diff(double a, double b) {
  const double two_pi = 2.0 * M_PI;
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

}  // namespace

TEST_CASE("joint_solution: published angles and vanishing residuals") {
  const AngleSolution sol = joint_solution();
  CHECK(sol.alpha.deg() == doctest::Approx(63.4349).epsilon(1e-4));
  CHECK(sol.phi.deg() == doctest::Approx(153.4349).epsilon(1e-4));
  CHECK(std::abs(sol.residuals.c1) < kTol);
  CHECK(std::abs(sol.residuals.c2) < kTol);
  CHECK(std::abs(residual_condition1(sol.alpha, sol.phi)) < kTol);
  CHECK(std::abs(residual_condition2(sol.alpha, sol.phi)) < kTol);
}

TEST_CASE("residual_condition1: alpha = 0 collapses to <m_f|m_i>") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(0.1, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Angle phi = Angle::radians(angle(rng));
    const Complex res = residual_condition1(Angle::radians(0.0), phi);
    const Complex mf_mi = overlap(basis_state(phi, +1),
                                  basis_state(Angle::radians(0.0), 0));
    CHECK(std::abs(res - mf_mi) < kTol);
    CHECK(std::abs(std::abs(res) - std::sin(phi.rad()) / std::sqrt(2.0)) <
          kTol);
  }
}

TEST_CASE("residuals match the brute-force series-oracle sums") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  for (int i = 0; i < 50; ++i) {
    const double a = angle(rng), f = angle(rng);
    CHECK(std::abs(residual_condition1(Angle::radians(a), Angle::radians(f)) -
                   oracle_residual(a, f, {-1, 0})) < kTol);
    CHECK(std::abs(residual_condition2(Angle::radians(a), Angle::radians(f)) -
                   oracle_residual(a, f, {-1, 1})) < kTol);
  }
}

TEST_CASE("conditions: completeness of the m_alpha basis") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  for (int i = 0; i < 50; ++i) {
    const Angle alpha = Angle::radians(angle(rng));
    const Angle phi = Angle::radians(angle(rng));
    const SpinState mi = basis_state(Angle::radians(0.0), 0);
    const SpinState mf = basis_state(phi, +1);
    const Complex k_plus =
        overlap(mf, basis_state(alpha, +1)) * overlap(basis_state(alpha, +1), mi);
    CHECK(std::abs(residual_condition1(alpha, phi) + k_plus -
                   overlap(mf, mi)) < kTol);
  }
}

TEST_CASE("phi_closed_form: reproduces the joint phi") {
  const AngleSolution sol = joint_solution();
  const Angle closed = phi_closed_form(sol.alpha, 0);
  CHECK(circular_diff(closed.rad(), sol.phi.rad()) < 1e-8);
  // Branch index shifts by full 4*pi turns.
  CHECK(phi_closed_form(sol.alpha, 1).rad() ==
        doctest::Approx(closed.rad() + 4.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("phi_closed_form: singular at alpha = pi") {
  CHECK_THROWS_AS(phi_closed_form(Angle::radians(M_PI), 0), SingularAlpha);
  CHECK_THROWS_AS(phi_closed_form(Angle::degrees(180.0), 0), SingularAlpha);
}

TEST_CASE("phi_closed_form: residual check over an alpha grid") {
  std::vector<double> alphas;
  for (double deg = 10.0; deg <= 170.0; deg += 2.5) {
    alphas.push_back(deg * M_PI / 180.0);
  }
  const auto checks = cross_validate_phi_closed_form(alphas, 1e-8);
  REQUIRE(checks.size() == alphas.size());
  for (const auto& check : checks) {
    // Every grid point either matches or is reported as a discrepancy; on
    // this grid the closed form is exact everywhere.
    CHECK(!check.singular);
    CHECK(check.matched);
  }
}

TEST_CASE("solve_phi: finds the joint root and the trivial root") {
  const AngleSolution sol = joint_solution();
  const auto roots = solve_phi(sol.alpha);
  REQUIRE(!roots.empty());
  bool found_joint = false, found_trivial = false;
  for (const Angle& phi : roots) {
    CHECK(std::abs(residual_condition1(sol.alpha, phi)) < 1e-10);
    if (circular_diff(phi.rad(), sol.phi.rad()) < 1e-10) found_joint = true;
    if (circular_diff(phi.rad(), sol.alpha.rad()) < 1e-10) found_trivial = true;
  }
  CHECK(found_joint);
  CHECK(found_trivial);  // phi = alpha always kills the k != +1 amplitudes
}

TEST_CASE("solve_phi: closed form agrees with a numeric root") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> angle(0.2, 3.0);
  for (int i = 0; i < 10; ++i) {
    const Angle alpha = Angle::radians(angle(rng));
    Angle closed = Angle::radians(0.0);
    try {
      closed = phi_closed_form(alpha, 0);
    } catch (const SingularAlpha&) {
      continue;
    }
    const auto roots = solve_phi(alpha);
    bool matched = false;
    for (const Angle& phi : roots) {
      if (circular_diff(phi.rad(), closed.rad()) < 1e-8) matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("residual_cheshire: diagonal case and analytic form") {
  // gamma = 0, alpha = 0, phi = 0: <m_z=+1|J_z|m_z=+1> = 1.
  const Complex diag = residual_cheshire(Angle::radians(0.0),
                                         Angle::radians(0.0),
                                         Angle::radians(0.0));
  CHECK(std::abs(diag - 1.0) < kTol);

  // Against the direct matrix-element oracle built from the series d-matrix.
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  for (int i = 0; i < 50; ++i) {
    const double a = angle(rng), f = angle(rng), g = angle(rng);
    const Eigen::Matrix3d dg = oracle::wigner_d_series(g);
    const Eigen::Vector3d jz(1.0, 0.0, -1.0);
    const Eigen::Matrix3d jgamma = dg * jz.asDiagonal() * dg.transpose();
    const Eigen::Vector3d mf = oracle::wigner_d_series(f).col(0);
    const Eigen::Vector3d ma = oracle::wigner_d_series(a).col(0);
    const double expected = mf.dot(jgamma * ma);
    CHECK(std::abs(residual_cheshire(Angle::radians(a), Angle::radians(f),
                                     Angle::radians(g)) -
                   expected) < kTol);
  }
}

TEST_CASE("solve_gamma: roots at the joint solution") {
  const AngleSolution sol = joint_solution();
  const auto roots = solve_gamma(sol.alpha, sol.phi);
  REQUIRE(roots.size() == 2);
  // cos(gamma - (alpha+phi)/2) = 0: gamma = (alpha+phi)/2 -/+ pi/2.
  const double mid = 0.5 * (sol.alpha.rad() + sol.phi.rad());
  CHECK(roots[0].rad() == doctest::Approx(mid - M_PI / 2.0).epsilon(1e-9));
  CHECK(roots[1].rad() == doctest::Approx(mid + M_PI / 2.0).epsilon(1e-9));
  for (const Angle& gamma : roots) {
    CHECK(std::abs(residual_cheshire(sol.alpha, sol.phi, gamma)) < 1e-10);
    // The grin stays visible on the whole beam: <J_gamma>_w != 0.
    const SpinState pre = basis_state(Angle::radians(0.0), 0);
    const SpinState post = basis_state(sol.phi, +1);
    const WeakValue jw = weak_value(pre, post, j_component(gamma));
    CHECK(std::abs(jw.value) > 0.5);
  }
}

TEST_CASE("solve_gamma: every root re-checks below tolerance") {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Angle alpha = Angle::radians(angle(rng));
    const Angle phi = Angle::radians(angle(rng));
    for (const Angle& gamma : solve_gamma(alpha, phi)) {
      CHECK(std::abs(residual_cheshire(alpha, phi, gamma)) < 1e-10);
    }
  }
}

TEST_CASE("cheshire_solution: gamma satisfies all active conditions") {
  const AngleSolution sol = cheshire_solution();
  REQUIRE(sol.gamma.has_value());
  CHECK(std::abs(sol.residuals.c1) < kTol);
  CHECK(std::abs(sol.residuals.c2) < kTol);
  CHECK(std::abs(sol.residuals.cc) < kTol);
  CHECK(sol.gamma->rad() == doctest::Approx(std::atan(1.0 / 3.0)).epsilon(1e-9));
}
