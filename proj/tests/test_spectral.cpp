#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "llgwire/spectral.hpp"
#include "llgwire/stationary.hpp"
#include "llgwire/tridiagonal.hpp"

using namespace llgwire;

namespace {

const Grid kDesk = make_grid(15.0, 0.2);

SymTridiagonal random_tridiagonal(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SymTridiagonal t;
  t.d.resize(n);
  t.e.resize(n - 1);
  for (auto& v : t.d) v = u(rng);
  for (auto& v : t.e) v = u(rng);
  return t;
}

Eigen::VectorXd dense_eigenvalues(const SymTridiagonal& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = t.d[i];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = t.e[i];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
}

double aligned(const ScalarField& v, const std::vector<double>& candidate) {
  ScalarField c(v.grid, candidate);
  c[0] = 0.0;
  c[c.size() - 1] = 0.0;
  return std::abs(inner(v, c)) / (norms(v).l2 * norms(c).l2);
}

}  // namespace

TEST_CASE("sturm bisection matches a dense eigensolver") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto t = random_tridiagonal(40, seed);
    const auto ref = dense_eigenvalues(t);
    double lo, hi;
    t.gerschgorin(lo, hi);
    CHECK(lo <= ref(0));
    CHECK(hi >= ref(39));
    CHECK(sturm_count(t, lo - 1.0) == 0);
    CHECK(sturm_count(t, hi + 1.0) == 40);
    std::size_t prev = 0;
    for (double x = lo; x <= hi; x += 0.05) {
      const auto c = sturm_count(t, x);
      CHECK(c >= prev);
      prev = c;
    }
    for (std::size_t k = 0; k < 40; ++k) {
      double blo, bhi;
      const double lam = bisect_eigenvalue(t, k, &blo, &bhi);
      CHECK(lam == doctest::Approx(ref(static_cast<Eigen::Index>(k))).epsilon(1e-12).scale(1.0));
      CHECK(blo <= lam);
      CHECK(bhi >= lam);
    }
  }
}

TEST_CASE("inverse iteration returns orthonormal eigenvectors") {
  const auto t = random_tridiagonal(30, 7);
  std::vector<std::vector<double>> vecs;
  for (std::size_t k = 0; k < 6; ++k) {
    double lo, hi;
    const double lam = bisect_eigenvalue(t, k, &lo, &hi);
    auto v = inverse_iteration(t, lam, vecs, lo, hi);
    const auto av = t.apply(v);
    double res = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      res += (av[i] - lam * v[i]) * (av[i] - lam * v[i]);
      nn += v[i] * v[i];
    }
    CHECK(std::sqrt(res) <= 1e-10);
    CHECK(nn == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& p : vecs) {
      double d = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) d += p[i] * v[i];
      CHECK(std::abs(d) <= 1e-12);
    }
    vecs.push_back(std::move(v));
  }
}

TEST_CASE("free Dirichlet box") {
  const double h0 = 0.1;
  const auto op = make_schrodinger(kDesk, std::vector<double>(kDesk.n, 1.0 + h0));
  const auto rep = lowest_eigenpairs(op, 3);
  const double L = kDesk.half_length, dx = kDesk.dx;
  for (std::size_t j = 0; j < 3; ++j) {
    const double k = (j + 1.0) * std::numbers::pi / (2.0 * L);
    const double exact = 1.0 + h0 + k * k;
    CHECK(std::abs(rep.eigenvalues[j] - exact) <= 2.0 * dx * dx * exact);
    // discrete box spectrum is known exactly
    const double discrete = 1.0 + h0 + 4.0 / (dx * dx) * std::pow(std::sin(0.5 * k * dx), 2);
    CHECK(rep.eigenvalues[j] == doctest::Approx(discrete).epsilon(1e-12));
  }
  CHECK(rep.tag == "custom");
  CHECK(rep.essential_spectrum_floor == doctest::Approx(1.0));  // no h0 recorded for custom operators
  CHECK_FALSE(rep.lower_bound_violated);
}

TEST_CASE("operator potentials") {
  for (double h0 : {0.1, -0.5}) {
    const auto sol = solve_theta(h0, kDesk);
    const auto v1 = schrodinger_potential(sol, OperatorKind::L1);
    const auto v2 = schrodinger_potential(sol, OperatorKind::L2);
    for (std::size_t i = 0; i < kDesk.n; ++i) {
      CHECK(std::abs(v2[i] - v1[i] + 2.0 * h0 * (1.0 - sol.w[i].x)) <= 1e-14);
    }
    const double tail = 10.0 * std::exp(-std::sqrt(1.0 + h0) * kDesk.half_length);
    CHECK(std::abs(v1[0] - (1.0 + h0)) <= tail);
    CHECK(std::abs(v2[kDesk.n - 1] - (1.0 + h0)) <= tail);
    const auto op = build_operator(sol, OperatorKind::L1);
    for (std::size_t i = 0; i + 2 < kDesk.n; ++i) {
      CHECK(op.matrix.d[i] == doctest::Approx(2.0 / (kDesk.dx * kDesk.dx) + v1[i + 1]));
    }
    for (double e : op.matrix.e) CHECK(e == doctest::Approx(-1.0 / (kDesk.dx * kDesk.dx)));
  }
  CHECK_THROWS_AS(build_operator(solve_theta(0.1, kDesk), OperatorKind::Custom), std::invalid_argument);
}

TEST_CASE("self-adjoint spectra agree with a dense solve") {
  const auto sol = solve_theta(0.1, kDesk);
  for (auto kind : {OperatorKind::L1, OperatorKind::L2}) {
    const auto op = build_operator(sol, kind);
    const auto ref = dense_eigenvalues(op.matrix);
    const auto rep = lowest_eigenpairs(op, 8);
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(rep.eigenvalues[j] == doctest::Approx(ref(static_cast<Eigen::Index>(j))).epsilon(1e-12).scale(1.0));
      CHECK(rep.residuals[j] <= 1e-8);
      for (std::size_t k = 0; k <= j; ++k) {
        const double ip = inner(rep.eigenfunctions[j], rep.eigenfunctions[k]);
        CHECK(ip == doctest::Approx(j == k ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
      }
    }
    CHECK(std::is_sorted(rep.eigenvalues.begin(), rep.eigenvalues.end()));
  }
}

TEST_CASE("kernel and negative direction for h0 > 0") {
  const double dx2 = kDesk.dx * kDesk.dx;
  const auto sol = solve_theta(0.1, kDesk);
  const auto l1 = lowest_eigenpairs(build_operator(sol, OperatorKind::L1), 2);
  CHECK(std::abs(l1.eigenvalues[0]) <= 5 * dx2);
  CHECK(l1.eigenvalues[1] > 0.0);
  CHECK(aligned(l1.eigenfunctions[0], sol.dtheta.v) >= 0.999);

  const auto op2 = build_operator(sol, OperatorKind::L2);
  const auto l2 = lowest_eigenpairs(op2, 3);
  CHECK(l2.eigenvalues[0] >= -0.4);
  CHECK(l2.eigenvalues[0] < 0.0);
  CHECK(std::abs(l2.eigenvalues[1]) <= 5 * dx2);
  CHECK(aligned(l2.eigenfunctions[1], op2.kernel_candidate) >= 0.999);
  CHECK_FALSE(l2.lower_bound_violated);

  CHECK(kernel_residual(build_operator(sol, OperatorKind::L1), sol.dtheta) <= 0.02);
  CHECK(l2.kernel_residuals.at(0) <= 0.02);
  CHECK(kernel_residual(op2, sol.dtheta) >= 0.05);
  // <L2 theta', theta'> < 0
  CHECK(inner(op2.apply(sol.dtheta), sol.dtheta) < 0.0);
}

TEST_CASE("kernel and negative direction for h0 < 0") {
  const double dx2 = kDesk.dx * kDesk.dx;
  const auto sol = solve_theta(-0.5, kDesk);
  const auto op1 = build_operator(sol, OperatorKind::L1);
  const auto l1 = lowest_eigenpairs(op1, 2);
  CHECK(l1.eigenvalues[0] >= -2.0);
  CHECK(l1.eigenvalues[0] < 0.0);
  CHECK(std::abs(l1.eigenvalues[1]) <= 5 * dx2);
  CHECK(aligned(l1.eigenfunctions[1], sol.dtheta.v) >= 0.999);
  const auto op2 = build_operator(sol, OperatorKind::L2);
  const auto l2 = lowest_eigenpairs(op2, 1);
  CHECK(std::abs(l2.eigenvalues[0]) <= 5 * dx2);
  CHECK(aligned(l2.eigenfunctions[0], op2.kernel_candidate) >= 0.999);
  // the reading |gamma1| <= 4|h0| holds here
  CHECK_FALSE(l1.lower_bound_violated);
}

TEST_CASE("exactly one negative eigenvalue across field strengths") {
  // A fixed dx^2 band cannot separate the kernel from the negative mode for
  // stiff walls (at h0 = 10 the kernel eigenvalue is -1.7 on dx = 0.2), so the
  // structure is read off the refinement: the lowest eigenvalue converges to a
  // negative limit, the second vanishes like dx^2, the third is positive.
  auto check = [](double h0, OperatorKind kind) {
    CAPTURE(h0);
    const auto a = lowest_eigenpairs(build_operator(solve_theta(h0, make_grid(15.0, 0.1)), kind), 3);
    const auto b = lowest_eigenpairs(build_operator(solve_theta(h0, make_grid(15.0, 0.05)), kind), 3);
    CHECK(b.eigenvalues[0] < 0.0);
    CHECK(std::abs(a.eigenvalues[0] - b.eigenvalues[0]) <= 0.02 * std::abs(b.eigenvalues[0]));
    CHECK(a.eigenvalues[1] / b.eigenvalues[1] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::abs(b.eigenvalues[1]) <= 0.02 * std::abs(b.eigenvalues[0]));
    CHECK(b.eigenvalues[2] > 0.0);
    return b;
  };
  for (double h0 : {0.05, 0.1, 0.5, 1.0, 2.0, 10.0}) {
    CHECK(check(h0, OperatorKind::L2).eigenvalues[0] >= -4.0 * h0);
  }
  for (double h0 : {-0.1, -0.3, -0.5, -0.7}) check(h0, OperatorKind::L1);
}

TEST_CASE("truncation and refinement insensitivity") {
  const auto a = lowest_eigenpairs(build_operator(solve_theta(0.1, kDesk), OperatorKind::L2), 2);
  const auto b = lowest_eigenpairs(build_operator(solve_theta(0.1, make_grid(30.0, 0.2)), OperatorKind::L2), 2);
  const double allow = std::exp(-std::sqrt(1.1) * 15.0) + 5 * 0.04;
  CHECK(std::abs(a.eigenvalues[0] - b.eigenvalues[0]) <= allow);
  CHECK(std::abs(a.eigenvalues[1] - b.eigenvalues[1]) <= allow);

  const auto h = lowest_eigenpairs(build_operator(solve_theta(0.1, make_grid(15.0, 0.1)), OperatorKind::L2), 2);
  const auto q = lowest_eigenpairs(build_operator(solve_theta(0.1, make_grid(15.0, 0.05)), OperatorKind::L2), 2);
  for (std::size_t j = 0; j < 2; ++j) {
    const double extrapolated_err = std::abs(h.eigenvalues[j] - q.eigenvalues[j]) * 4.0 / 3.0;
    const double richardson = (4.0 * q.eigenvalues[j] - h.eigenvalues[j]) / 3.0;
    CHECK(std::abs(a.eigenvalues[j] - richardson) <= 4.0 * 4.0 * extrapolated_err + 1e-12);
  }
}

TEST_CASE("argument validation") {
  const auto op = build_operator(solve_theta(0.1, kDesk), OperatorKind::L1);
  CHECK_THROWS_AS(lowest_eigenpairs(op, 0), std::invalid_argument);
  CHECK_THROWS_AS(lowest_eigenpairs(op, 9), std::invalid_argument);
  CHECK_THROWS_AS(kernel_residual(op, ScalarField(kDesk)), std::invalid_argument);
  CHECK_THROWS_AS(make_schrodinger(kDesk, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("linearized block operator") {
  const auto sol = solve_theta(0.1, kDesk);
  const double dx2 = kDesk.dx * kDesk.dx;
  const auto rep = linearized_spectrum(sol, 1.0, 4);
  REQUIRE(rep.kernel_residuals.size() == 2);
  CHECK(rep.kernel_residuals[0] <= 5 * dx2);
  CHECK(rep.kernel_residuals[1] <= 5 * dx2);
  CHECK(rep.all_eigenvalues.size() == 2 * (kDesk.n - 2));
  CHECK(rep.complex_eigenvalues.size() == 4);
  CHECK(rep.complex_eigenvectors.size() == 4);
  CHECK(rep.near_kernel_band == doctest::Approx(5 * dx2));
  CHECK(rep.ray_sample_count > 10);
  CHECK(rep.ray_deviation <= 0.05);
  // eigenvalues come in conjugate pairs
  for (const auto& z : rep.all_eigenvalues) {
    const auto it = std::find_if(rep.all_eigenvalues.begin(), rep.all_eigenvalues.end(),
                                 [&](const auto& w) { return std::abs(w - std::conj(z)) <= 1e-8 * (1 + std::abs(z)); });
    CHECK(it != rep.all_eigenvalues.end());
  }
  MESSAGE("negative real part count at h0 = 0.1: " << rep.negative_real_part_count);

  CHECK_THROWS_AS(linearized_spectrum(sol, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(linearized_spectrum(solve_theta(0.1, make_grid(15.0, 0.05)), 1.0, 2), std::invalid_argument);
}

TEST_CASE("linearized spectrum of the domain wall factorizes") {
  // For h0 = 0, L1 = L2 = L and the block operator has eigenvalues (alpha +- i) mu.
  const auto sol = domain_wall(kDesk);
  const double alpha = 0.7;
  const auto rep = linearized_spectrum(sol, alpha, 2);
  const auto mu = lowest_eigenpairs(build_operator(sol, OperatorKind::L1), 3);
  for (std::size_t j = 1; j < 3; ++j) {
    for (double s : {1.0, -1.0}) {
      const std::complex<double> target(alpha * mu.eigenvalues[j], s * mu.eigenvalues[j]);
      double best = 1e300;
      for (const auto& z : rep.all_eigenvalues) best = std::min(best, std::abs(z - target));
      CHECK(best <= 1e-8);
    }
  }
}
