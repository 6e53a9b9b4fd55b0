#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "llgwire/energetics.hpp"
#include "llgwire/stationary.hpp"
#include "support.hpp"

using namespace llgwire;
using testsupport::theta_exact;

namespace {
const Grid kDesk = make_grid(15.0, 0.2);
const std::vector<double> kFields = {0.1, 1.0, 10.0, -0.1, -0.5, -0.9};
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("domain wall closed form") {
  const auto sol = domain_wall(kDesk);
  CHECK(sol.h0 == 0.0);
  CHECK(sol.theta[kDesk.center()] == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(sol.theta[0] == doctest::Approx(2.0 * std::atan(std::exp(-15.0))).epsilon(1e-12));
  CHECK(sol.theta[0] == doctest::Approx(6.1e-7).epsilon(0.01));
  CHECK(sol.energy_total == doctest::Approx(2.0).epsilon(1e-6));
  for (std::size_t i = 0; i < kDesk.n; ++i) {
    const double x = kDesk.x(i);
    CHECK(sol.w[i].x == doctest::Approx(-std::tanh(x)).epsilon(1e-14).scale(1.0));
    CHECK(sol.dtheta[i] == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-13).scale(1e-3));
  }
  // solve_theta delegates at h0 = 0
  const auto same = solve_theta(0.0, kDesk);
  CHECK(same.theta.v == sol.theta.v);
}

TEST_CASE("profiles match the closed form") {
  for (double h0 : kFields) {
    CAPTURE(h0);
    const auto sol = solve_theta(h0, kDesk);
    double err = 0.0;
    for (std::size_t i = 0; i < kDesk.n; ++i) err = std::max(err, std::abs(sol.theta[i] - theta_exact(h0, kDesk.x(i))));
    CHECK(err <= 1e-9);
    // off-node evaluation through the continuous profile
    double off = 0.0;
    for (double x = -14.93; x < 15.0; x += 0.37) off = std::max(off, std::abs(sol.profile.theta(x) - theta_exact(h0, x)));
    CHECK(off <= 1e-8);
  }
}

TEST_CASE("profiles match an independent dx/256 re-integration") {
  for (double h0 : kFields) {
    CAPTURE(h0);
    const auto sol = solve_theta(h0, kDesk);
    const double h = kDesk.dx / 256.0;
    double err = 0.0;
    for (double x : {0.2, 1.0, 2.0, 3.6, 5.0, 8.0}) {
      const std::size_t i = kDesk.center() + static_cast<std::size_t>(std::llround(x / kDesk.dx));
      err = std::max(err, std::abs(sol.theta[i] - testsupport::theta_rk4(h0, kDesk.x(i), h)));
    }
    CHECK(err <= 1e-9);
  }
}

TEST_CASE("golden value theta(1) at h0 = 10") {
  // Frozen from the closed form (50-digit evaluation), 2 atan2(sqrt 11, -sqrt 10 sinh(sqrt 11)).
  const auto sol = solve_theta(10.0, kDesk);
  CHECK(sol.theta[kDesk.center() + 5] == doctest::Approx(6.1310962137583855).epsilon(1e-10));
}

TEST_CASE("initial data at x = 0") {
  for (double h0 : kFields) {
    CAPTURE(h0);
    const auto sol = solve_theta(h0, kDesk);
    const std::size_t c = kDesk.center();
    if (h0 > 0) {
      CHECK(sol.theta[c] == doctest::Approx(kPi).epsilon(1e-15));
      CHECK(sol.dtheta[c] == doctest::Approx(std::sqrt(4 * h0)).epsilon(1e-12));
    } else {
      CHECK(sol.theta[c] == doctest::Approx(std::acos(-1 - 2 * h0)).epsilon(1e-15));
      CHECK(sol.dtheta[c] == 0.0);
    }
  }
  CHECK(solve_theta(0.1, kDesk).dtheta[kDesk.center()] == doctest::Approx(0.6324555320336759));
  const auto half = solve_theta(-0.5, kDesk);
  CHECK(half.theta[kDesk.center()] == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("hamiltonian residual") {
  for (double h0 : kFields) {
    CAPTURE(h0);
    CHECK(max_hamiltonian_residual(solve_theta(h0, kDesk)) <= 1e-8);
  }
  CHECK(max_hamiltonian_residual(domain_wall(kDesk)) <= 1e-14);
}

TEST_CASE("symmetry and monotonicity") {
  for (double h0 : kFields) {
    CAPTURE(h0);
    const auto sol = solve_theta(h0, kDesk);
    const std::size_t n = kDesk.n, c = kDesk.center();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = n - 1 - i;
      if (h0 > 0) {
        CHECK(sol.theta[i] + sol.theta[j] == doctest::Approx(2 * kPi).epsilon(1e-14));
        CHECK(sol.dtheta[i] == sol.dtheta[j]);
      } else {
        CHECK(sol.theta[i] == sol.theta[j]);
        CHECK(sol.dtheta[i] == -sol.dtheta[j]);
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (h0 > 0) {
        CHECK(sol.theta[i + 1] >= sol.theta[i]);
      } else if (i + 1 <= c) {
        CHECK(sol.theta[i + 1] >= sol.theta[i]);
      } else {
        CHECK(sol.theta[i + 1] <= sol.theta[i]);
      }
    }
    CHECK(sol.w.max_norm_defect() <= 1e-12);
    CHECK(sol.n.max_norm_defect() <= 1e-12);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(dot(sol.w[i], sol.n[i])) <= 1e-15);
  }
}

TEST_CASE("tail decay rates") {
  struct Case {
    double h0, rel;
  };
  for (auto [h0, rel] : {Case{0.0, 0.02}, Case{0.1, 0.05}, Case{1.0, 0.05}, Case{-0.5, 0.05}}) {
    CAPTURE(h0);
    const auto r = tail_rate(solve_theta(h0, kDesk));
    const double k = std::sqrt(1.0 + h0);
    CHECK(std::abs(r.left - k) <= rel * k);
    CHECK(std::abs(r.right - k) <= rel * k);
    CHECK(r.left_points >= 20);
  }
  // h0 = -0.9 decays too slowly to reach 1e-10 on [-15, 15]
  CHECK_THROWS_AS(tail_rate(solve_theta(-0.9, kDesk)), std::runtime_error);
}

TEST_CASE("discrete stationarity residual is second order") {
  const double r1 = residual_stationarity(domain_wall(kDesk));
  const double r2 = residual_stationarity(domain_wall(make_grid(15.0, 0.1)));
  CHECK(r1 <= 0.01);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
  const double s1 = residual_stationarity(solve_theta(0.1, kDesk));
  const double s2 = residual_stationarity(solve_theta(0.1, make_grid(15.0, 0.1)));
  CHECK(s1 / s2 == doctest::Approx(4.0).epsilon(0.2));

  // constant e1 is exactly stationary: H(e1) = h0 e1
  const auto H = effective_field(MagnetizationField::constant(kDesk, e1), 0.3);
  for (std::size_t i = 0; i < kDesk.n; ++i) CHECK(norm(H[i] - 0.3 * e1) == 0.0);
}

TEST_CASE("profile shapes") {
  const auto m001 = profile_metrics(solve_theta(-0.01, kDesk));
  CHECK(m001.min_cos < -0.9);
  const auto m09 = profile_metrics(solve_theta(-0.9, kDesk));
  CHECK(m09.min_cos >= 0.8 - 1e-12);
  CHECK(m09.plateau_width == 0.0);
  const auto m099 = profile_metrics(solve_theta(-0.99, kDesk));
  CHECK(m099.max_dist_from_e1 <= 0.25);
  const auto sharp = profile_metrics(solve_theta(10.0, kDesk));
  const auto soft = profile_metrics(solve_theta(0.1, kDesk));
  CHECK(sharp.transition_width < soft.transition_width);
  CHECK(sharp.plateau_width < soft.plateau_width);
}

TEST_CASE("continuous energy") {
  for (double h0 : kFields) {
    CAPTURE(h0);
    const auto sol = solve_theta(h0, kDesk);
    // On the zero level set of the Hamiltonian the density equals theta'^2, so
    // the discrete energy of the samples converges to the same value.
    // The gap is a second-order discretization error.
    CHECK(sol.energy_total > 0.0);
    const double coarse = energy(sol.w, h0).total - sol.energy_total;
    CHECK(std::abs(coarse) <= 0.05 * sol.energy_total);
    const auto s1 = solve_theta(h0, make_grid(15.0, 0.1));
    const auto s2 = solve_theta(h0, make_grid(15.0, 0.05));
    const double e1 = energy(s1.w, h0).total - s1.energy_total;
    const double e2 = energy(s2.w, h0).total - s2.energy_total;
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(solve_theta(-1.0, kDesk), std::invalid_argument);
  CHECK_THROWS_AS(solve_theta(-1.5, kDesk), std::invalid_argument);
  CHECK_THROWS_AS(solve_theta(0.1, kDesk, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_theta(0.1, make_grid(1.5, 1.0)), std::invalid_argument);  // n = 4, no node at 0
}
