#include "llgwire/modulation.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <cmath>
#include <numbers>
#include <vector>

#include "llgwire/kernels.hpp"

namespace llgwire {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap_angle(double phi) {
  double r = std::remainder(phi, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Gauge::Gauge(double y_, double phi_) : y(y_), phi(wrap_angle(phi_)) {}

double Gauge::size() const { return std::abs(y) + std::abs(wrap_angle(phi)); }

namespace {

/// Cubic spline with zero end slopes through (x_i, f_i) on a uniform grid;
/// returns second derivatives at the nodes.
std::vector<double> spline_second_derivatives(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> a(n), b(n), c(n), r(n);
  b[0] = dx / 3.0;
  c[0] = dx / 6.0;
  r[0] = (f[1] - f[0]) / dx;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = dx / 6.0;
    b[i] = 2.0 * dx / 3.0;
    c[i] = dx / 6.0;
    r[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / dx;
  }
  a[n - 1] = dx / 6.0;
  b[n - 1] = dx / 3.0;
  r[n - 1] = -(f[n - 1] - f[n - 2]) / dx;
  // Thomas algorithm (diagonally dominant).
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  std::vector<double> M(n);
  M[n - 1] = r[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) M[i] = (r[i] - c[i] * M[i + 1]) / b[i];
  return M;
}

double spline_eval(const std::vector<double>& f, const std::vector<double>& M, double x0, double dx,
                   double x) {
  const std::size_t n = f.size();
  const double pos = (x - x0) / dx;
  if (pos <= 0.0) return f[0];
  if (pos >= static_cast<double>(n - 1)) return f[n - 1];
  const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
  const double t = pos - static_cast<double>(k);
  const double A = 1.0 - t, B = t;
  return A * f[k] + B * f[k + 1] + ((A * A * A - A) * M[k] + (B * B * B - B) * M[k + 1]) * dx * dx / 6.0;
}

}  // namespace

MagnetizationField apply_gauge(const MagnetizationField& m, const Gauge& g) {
  const Grid& grid = m.grid();
  const std::size_t n = grid.n;
  VectorField out(grid);
  const double shift = g.y / grid.dx;
  const double k = std::round(shift);
  if (std::abs(shift - k) <= 1e-12 * std::max(1.0, std::abs(shift))) {
    const auto ki = static_cast<std::ptrdiff_t>(k);
    for (std::size_t i = 0; i < n; ++i) {
      const std::ptrdiff_t src = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i) - ki, 0,
                                                             static_cast<std::ptrdiff_t>(n) - 1);
      out[i] = m[static_cast<std::size_t>(src)];
    }
  } else {
    std::array<std::vector<double>, 3> comp, second;
    for (int c = 0; c < 3; ++c) {
      comp[c].resize(n);
      for (std::size_t i = 0; i < n; ++i) comp[c][i] = m[i][c];
      second[c] = spline_second_derivatives(comp[c], grid.dx);
    }
    const double x0 = grid.x(0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xs = grid.x(i) - g.y;
      for (int c = 0; c < 3; ++c) out[i][c] = spline_eval(comp[c], second[c], x0, grid.dx, xs);
    }
  }
  for (auto& v : out.v) v = rotate_e1(v, g.phi);
  return MagnetizationField::normalized(std::move(out));
}

MagnetizationField gauge_orbit_point(const StationarySolution& sol, const Gauge& g) {
  const Grid& grid = sol.grid();
  VectorField out(grid);
  for (std::size_t i = 0; i < grid.n; ++i) out[i] = rotate_e1(sol.profile.w(grid.x(i) - g.y), g.phi);
  return MagnetizationField::normalized(std::move(out));
}

FrameDecomposition decompose(const StationarySolution& sol, const MagnetizationField& m) {
  const Grid& grid = sol.grid();
  if (!(m.grid() == grid)) throw std::invalid_argument("decompose: field on a different grid");
  FrameDecomposition fd{ScalarField(grid), ScalarField(grid), ScalarField(grid), 0.0, false};
  const VectorField eta = m - sol.w;
  for (std::size_t i = 0; i < grid.n; ++i) {
    fd.mu[i] = dot(eta[i], sol.w[i]);
    fd.nu[i] = dot(eta[i], sol.n[i]);
    fd.rho[i] = eta[i].z;
  }
  fd.eta_h1 = norms(eta).h1;
  fd.beyond_regime = fd.eta_h1 > 0.5;
  return fd;
}

GaugeFit fit_gauge(const StationarySolution& sol, const MagnetizationField& m, double tol, int max_iter) {
  const Grid& grid = sol.grid();
  if (!(m.grid() == grid)) throw std::invalid_argument("fit_gauge: field on a different grid");
  const std::size_t n = grid.n;
  const auto& prof = sol.profile;

  double jy = 0.0, jphi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    jy += grid.weight(i) * sol.dtheta[i] * sol.dtheta[i];
    jphi -= grid.weight(i) * sol.w[i].y * sol.w[i].y;
  }

  GaugeFit fit;
  fit.eta = VectorField(grid);
  double y = 0.0, phi = 0.0;
  for (int it = 0; it <= max_iter; ++it) {
    double f1 = 0.0, f2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xs = grid.x(i) - y;
      const double c = prof.cos_theta(xs), s = prof.sin_theta(xs), d = prof.dtheta(xs);
      const Vec3 e = rotate_e1(m[i], -phi) - Vec3{c, s, 0.0};
      fit.eta[i] = e;
      f1 += grid.weight(i) * d * dot(e, Vec3{-s, c, 0.0});
      f2 += grid.weight(i) * s * e.z;
    }
    fit.constraint_dx = f1;
    fit.constraint_rot = f2;
    fit.residual = std::hypot(f1, f2);
    fit.iterations = it;
    if (!std::isfinite(fit.residual)) break;
    if (fit.residual <= tol) {
      fit.g = Gauge(y, phi);
      return fit;
    }
    if (it == max_iter) break;
    y -= f1 / jy;
    phi -= f2 / jphi;
  }
  throw GaugeFitError("fit_gauge: no convergence in " + std::to_string(max_iter) +
                      " iterations (|F| = " + std::to_string(fit.residual) + ")");
}

namespace {

double objective_exact(const StationarySolution& sol, const MagnetizationField& m, double y, double phi,
                       std::vector<Vec3>& scratch) {
  const Grid& grid = sol.grid();
  for (std::size_t i = 0; i < grid.n; ++i) scratch[i] = sol.profile.w(grid.x(i) - y);
  return std::sqrt(kernels::h1_distance_sq_shifted(m.values(), scratch, 0, phi, grid.dx));
}

}  // namespace

OrbitalDistance orbital_distance(const StationarySolution& sol, const MagnetizationField& m) {
  const Grid& grid = sol.grid();
  if (!(m.grid() == grid)) throw std::invalid_argument("orbital_distance: field on a different grid");
  const std::size_t n = grid.n;
  const double dx = grid.dx;
  const auto K = static_cast<std::ptrdiff_t>(std::floor(0.5 * grid.half_length / dx + 1e-9));
  constexpr int kAngles = 64;

  // Profile samples on the grid extended by K nodes on each side.
  std::vector<Vec3> ext(n + 2 * static_cast<std::size_t>(K));
  for (std::size_t j = 0; j < ext.size(); ++j) {
    ext[j] = sol.profile.w(grid.x(0) + (static_cast<double>(j) - static_cast<double>(K)) * dx);
  }

  const std::ptrdiff_t count = 2 * K + 1;
  std::vector<double> best_val(static_cast<std::size_t>(count));
  std::vector<int> best_ang(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
    const std::ptrdiff_t k = idx - K;  // y = k dx
    double bv = std::numeric_limits<double>::infinity();
    int ba = 0;
    for (int a = 0; a < kAngles; ++a) {
      const double phi = 2.0 * kPi * a / kAngles;
      const double v = kernels::h1_distance_sq_shifted(m.values(), ext, K - k, phi, dx);
      if (v < bv) {
        bv = v;
        ba = a;
      }
    }
    best_val[static_cast<std::size_t>(idx)] = bv;
    best_ang[static_cast<std::size_t>(idx)] = ba;
  }
  // Lowest value, ties broken towards the smallest |y| for determinism.
  std::ptrdiff_t bi = K;
  for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    const auto b = static_cast<std::size_t>(bi);
    if (best_val[u] < best_val[b] ||
        (best_val[u] == best_val[b] && std::abs(idx - K) < std::abs(bi - K))) {
      bi = idx;
    }
  }

  // Nelder-Mead in (y, phi).
  std::vector<Vec3> scratch(n);
  auto f = [&](const std::array<double, 2>& p) { return objective_exact(sol, m, p[0], p[1], scratch); };
  std::array<std::array<double, 2>, 3> simplex;
  simplex[0] = {static_cast<double>(bi - K) * dx, 2.0 * kPi * best_ang[static_cast<std::size_t>(bi)] / kAngles};
  simplex[1] = {simplex[0][0] + 0.5 * dx, simplex[0][1]};
  simplex[2] = {simplex[0][0], simplex[0][1] + kPi / kAngles};
  std::array<double, 3> fv{f(simplex[0]), f(simplex[1]), f(simplex[2])};
  for (int it = 0; it < 400; ++it) {
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    auto s = simplex;
    auto v = fv;
    for (int j = 0; j < 3; ++j) {
      simplex[j] = s[ord[j]];
      fv[j] = v[ord[j]];
    }
    const double size = std::max(std::abs(simplex[1][0] - simplex[0][0]) + std::abs(simplex[1][1] - simplex[0][1]),
                                 std::abs(simplex[2][0] - simplex[0][0]) + std::abs(simplex[2][1] - simplex[0][1]));
    if ((fv[2] - fv[0] <= 1e-10 && size <= 1e-8) || size <= 1e-12) break;
    const std::array<double, 2> c{0.5 * (simplex[0][0] + simplex[1][0]), 0.5 * (simplex[0][1] + simplex[1][1])};
    auto lerp = [&](double t) {
      return std::array<double, 2>{c[0] + t * (simplex[2][0] - c[0]), c[1] + t * (simplex[2][1] - c[1])};
    };
    const auto r = lerp(-1.0);
    const double fr = f(r);
    if (fr < fv[0]) {
      const auto e = lerp(-2.0);
      const double fe = f(e);
      if (fe < fr) {
        simplex[2] = e;
        fv[2] = fe;
      } else {
        simplex[2] = r;
        fv[2] = fr;
      }
    } else if (fr < fv[1]) {
      simplex[2] = r;
      fv[2] = fr;
    } else {
      const bool outside = fr < fv[2];
      const auto cpt = lerp(outside ? -0.5 : 0.5);
      const double fc = f(cpt);
      if (fc < (outside ? fr : fv[2])) {
        simplex[2] = cpt;
        fv[2] = fc;
      } else {
        for (int j = 1; j < 3; ++j) {
          simplex[j] = {0.5 * (simplex[0][0] + simplex[j][0]), 0.5 * (simplex[0][1] + simplex[j][1])};
          fv[j] = f(simplex[j]);
        }
      }
    }
  }
  int bj = 0;
  for (int j = 1; j < 3; ++j) {
    if (fv[j] < fv[bj]) bj = j;
  }
  OrbitalDistance out;
  const double coarse = std::sqrt(best_val[static_cast<std::size_t>(bi)]);
  if (fv[bj] <= coarse) {
    out.distance = fv[bj];
    out.argmin = Gauge(simplex[bj][0], simplex[bj][1]);
  } else {
    out.distance = coarse;
    out.argmin = Gauge(static_cast<double>(bi - K) * dx, 2.0 * kPi * best_ang[static_cast<std::size_t>(bi)] / kAngles);
  }
  out.touches_window_edge = std::abs(out.argmin.y) >= static_cast<double>(K) * dx - 0.5 * dx;
  return out;
}

}  // namespace llgwire
