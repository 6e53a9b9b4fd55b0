#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "llgwire/modulation.hpp"
#include "llgwire/stationary.hpp"
#include "support.hpp"

using namespace llgwire;

namespace {

const Grid kDesk = make_grid(15.0, 0.2);

// w + smooth random tangent bumps in the (n, e3) frame, projected to the sphere.
MagnetizationField smooth_perturbation(const StationarySolution& sol, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField f(sol.grid());
  double c[3], s[3], a[3], b[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = 6.0 * u(rng);
    s[k] = 1.0 + 0.8 * u(rng);
    a[k] = u(rng);
    b[k] = u(rng);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = sol.grid().x(i);
    double nu = 0.0, rho = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double g = std::exp(-std::pow((x - c[k]) / s[k], 2));
      nu += a[k] * g;
      rho += b[k] * g;
    }
    f[i] = sol.w[i] + amp * (nu * sol.n[i] + rho * e3);
  }
  return MagnetizationField::normalized(f);
}

}  // namespace

TEST_CASE("gauge group basics") {
  CHECK(wrap_angle(3 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(0.25) == 0.25);
  const Gauge g(1.5, 2 * std::numbers::pi + 0.1);
  CHECK(g.phi == doctest::Approx(0.1));
  CHECK(g.size() == doctest::Approx(1.6));
  CHECK(g.inverse().y == -1.5);
}

TEST_CASE("applying gauges") {
  const auto sol = solve_theta(0.1, kDesk);
  CHECK(testsupport::max_abs_diff(apply_gauge(sol.w, Gauge()), sol.w) <= 1e-15);

  const auto twice = apply_gauge(apply_gauge(sol.w, Gauge(0.0, std::numbers::pi)), Gauge(0.0, std::numbers::pi));
  CHECK(testsupport::max_abs_diff(twice, sol.w) <= 1e-12);

  const auto shifted = apply_gauge(sol.w, Gauge(3 * kDesk.dx, 0.0));
  for (std::size_t i = 3; i < kDesk.n; ++i) CHECK(norm(shifted[i] - sol.w[i - 3]) <= 1e-15);

  // sub-node shift through the spline vs the exact profile
  const Gauge sub(0.37, 0.5);
  CHECK(testsupport::max_abs_diff(apply_gauge(sol.w, sub), gauge_orbit_point(sol, sub), 3, 3) <= 1e-4);
  // exact orbit point at an integer shift agrees with the node copy
  CHECK(testsupport::max_abs_diff(gauge_orbit_point(sol, Gauge(0.4, 0.0)), apply_gauge(sol.w, Gauge(0.4, 0.0)), 2) <=
        1e-12);
}

TEST_CASE("frame decomposition") {
  const auto sol = solve_theta(0.1, kDesk);
  const auto zero = decompose(sol, sol.w);
  CHECK(zero.eta_h1 == 0.0);
  for (std::size_t i = 0; i < kDesk.n; ++i) {
    CHECK(zero.mu[i] == 0.0);
    CHECK(zero.nu[i] == 0.0);
    CHECK(zero.rho[i] == 0.0);
  }

  std::mt19937_64 rng(2024);
  double mu_ratio_max = 0.0, lo = 1e9, hi = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const double amp = 0.005 + 0.1 * (sample % 10) / 10.0;
    const auto m = smooth_perturbation(sol, amp, rng);
    const auto fd = decompose(sol, m);
    for (std::size_t i = 0; i < kDesk.n; ++i) {
      const double eta2 = norm2(m[i] - sol.w[i]);
      CHECK(std::abs(fd.mu[i] + 0.5 * eta2) <= 1e-12);
    }
    mu_ratio_max = std::max(mu_ratio_max, norms(fd.mu).h1 / (fd.eta_h1 * fd.eta_h1));
    VectorField tangential(kDesk);
    for (std::size_t i = 0; i < kDesk.n; ++i) tangential[i] = {fd.nu[i], fd.rho[i], 0.0};
    const double r = norms(tangential).h1 / fd.eta_h1;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    CHECK_FALSE(fd.beyond_regime);
  }
  MESSAGE("|mu|_H1/|eta|^2 max " << mu_ratio_max << ", |(nu,rho)|/|eta| in [" << lo << ", " << hi << "]");
  CHECK(mu_ratio_max <= 2.0);
  CHECK(lo >= 0.5);
  CHECK(hi <= 2.0);

  // halving eta halves nothing in the ratio: mu is quadratic
  std::mt19937_64 a(5), b(5);
  const auto big = decompose(sol, smooth_perturbation(sol, 0.08, a));
  const auto small = decompose(sol, smooth_perturbation(sol, 0.04, b));
  const double rb = norms(big.mu).h1 / (big.eta_h1 * big.eta_h1);
  const double rs = norms(small.mu).h1 / (small.eta_h1 * small.eta_h1);
  CHECK(rb / rs == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("fit_gauge recovers a synthetic gauge") {
  for (double h0 : {0.1, -0.5}) {
    CAPTURE(h0);
    const auto sol = solve_theta(h0, kDesk);
    const Gauge g0(0.4, 0.7);
    const auto fit = fit_gauge(sol, gauge_orbit_point(sol, g0));
    CHECK(fit.g.y == doctest::Approx(0.4).epsilon(1e-6).scale(1.0));
    CHECK(fit.g.phi == doctest::Approx(0.7).epsilon(1e-6).scale(1.0));
    CHECK(std::abs(fit.constraint_dx) <= 1e-9);
    CHECK(std::abs(fit.constraint_rot) <= 1e-9);
    CHECK(norms(fit.eta).h1 <= 1e-6);
  }
  const auto sol = solve_theta(0.1, kDesk);
  const auto id = fit_gauge(sol, sol.w);
  CHECK(id.g.size() == 0.0);
  CHECK(norms(id.eta).h1 <= 1e-14);
  CHECK(id.iterations == 0);
}

TEST_CASE("fit_gauge on perturbed states") {
  const auto sol = solve_theta(0.1, kDesk);
  std::mt19937_64 rng(11);
  double c1 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto m = apply_gauge(smooth_perturbation(sol, 0.03, rng), Gauge(0.1 * (k % 5) - 0.2, 0.05 * k - 0.4));
    const auto fit = fit_gauge(sol, m);
    CHECK(std::abs(fit.constraint_dx) <= 1e-9);
    CHECK(std::abs(fit.constraint_rot) <= 1e-9);
    c1 = std::max(c1, (fit.g.size() + norms(fit.eta).h1) / h1_distance(m, sol.w));
  }
  MESSAGE("calibrated C1 = " << c1);
  CHECK(c1 <= 5.0);
  CHECK_THROWS_AS(fit_gauge(sol, apply_gauge(sol.w, Gauge(2.0, 0.0)), 1e-10, 1), GaugeFitError);
}

TEST_CASE("orbital distance") {
  const auto sol = solve_theta(0.1, kDesk);
  CHECK(orbital_distance(sol, sol.w).distance <= 1e-8);
  const auto od = orbital_distance(sol, gauge_orbit_point(sol, Gauge(1.0, -0.6)));
  CHECK(od.distance <= 1e-6);
  CHECK(od.argmin.y == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(od.argmin.phi == doctest::Approx(-0.6).epsilon(1e-4));
  CHECK_FALSE(od.touches_window_edge);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 5; ++k) {
    const auto m = smooth_perturbation(sol, 0.1, rng);
    const double d = orbital_distance(sol, m).distance;
    CHECK(d <= h1_distance(m, sol.w) + 1e-12);
    // gauge invariance: rotations and node shifts are exact
    CHECK(orbital_distance(sol, apply_gauge(m, Gauge(0.0, 1.1))).distance == doctest::Approx(d).epsilon(1e-8));
    const auto moved = apply_gauge(m, Gauge(2 * kDesk.dx, 0.0));
    CHECK(std::abs(orbital_distance(sol, moved).distance - d) <= 1e-4);
  }
}
