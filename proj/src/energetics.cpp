#include "llgwire/energetics.hpp"

#include <cmath>
#include <stdexcept>

#include "llgwire/modulation.hpp"

namespace llgwire {

namespace {

/// a(s) = (s2^2 + s3^2)/|s|^2 and its gradient 2 (P s - a s)/|s|^2.
struct Aniso {
  double a;
  Vec3 grad;
};

Aniso aniso(const Vec3& s) {
  const double s2 = norm2(s);
  const double a = (s.y * s.y + s.z * s.z) / s2;
  const Vec3 ps{0.0, s.y, s.z};
  return {a, (2.0 / s2) * (ps - a * s)};
}

/// v^T (Hessian of a at s) v.
double aniso_hessian_form(const Vec3& s, const Vec3& v) {
  const double s2 = norm2(s);
  const auto [a, g] = aniso(s);
  const double pvv = v.y * v.y + v.z * v.z;
  return (2.0 * (pvv - a * norm2(v)) - 4.0 * dot(s, v) * dot(g, v)) / s2;
}

/// Raw gradient of E_{h0} with respect to the node values.
std::vector<Vec3> energy_gradient(const MagnetizationField& m, double h0) {
  const Grid& g = m.grid();
  const std::size_t n = m.size();
  const double dx = g.dx;
  std::vector<Vec3> out(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Vec3 d = (1.0 / dx) * (m[j + 1] - m[j]);
    const Vec3 ga = (0.5 * dx) * aniso(m[j] + m[j + 1]).grad;
    out[j] += ga - d;
    out[j + 1] += ga + d;
  }
  for (std::size_t i = 0; i < n; ++i) out[i].x -= h0 * g.weight(i);
  return out;
}

}  // namespace

VectorField effective_field(const MagnetizationField& m, double h0) {
  const std::size_t n = m.size();
  VectorField H = laplacian_neumann(m);
  std::vector<Vec3> cell(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) cell[j] = aniso(m[j] + m[j + 1]).grad;
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 a;
    if (i == 0) {
      a = -cell[0];
    } else if (i + 1 == n) {
      a = -cell[n - 2];
    } else {
      a = -0.5 * (cell[i - 1] + cell[i]);
    }
    const double normal = 1.0 - m[i].x * m[i].x;
    H[i] += a - normal * m[i];
    H[i].x += h0;
  }
  return H;
}

EnergyBreakdown energy(const MagnetizationField& m, double h0) {
  const Grid& g = m.grid();
  const std::size_t n = m.size();
  EnergyBreakdown e;
  double ex = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Vec3 s = m[j] + m[j + 1];
    ex += norm2(m[j + 1] - m[j]) / g.dx + g.dx * aniso(s).a;
  }
  e.exchange_anisotropy = 0.5 * ex;
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) z += g.weight(i) * (m[i].x - 1.0);
  e.zeeman = -h0 * z;
  e.total = e.exchange_anisotropy + e.zeeman;

  const VectorField H = effective_field(m, h0);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d += g.weight(i) * norm2(cross(m[i], H[i]));
  e.dissipation_rate = d;
  e.boundary_ok = (std::abs(std::abs(m[0].x) - 1.0) < 0.1) && (std::abs(std::abs(m[n - 1].x) - 1.0) < 0.1);
  return e;
}

double dissipation(const MagnetizationField& m, double h0, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("dissipation: alpha must be positive");
  return alpha * energy(m, h0).dissipation_rate;
}

ExpansionCheck quadratic_energy_expansion_check(const StationarySolution& sol, const VectorField& eta) {
  const Grid& g = sol.grid();
  if (!(eta.grid == g)) throw std::invalid_argument("expansion check: eta on a different grid");
  ExpansionCheck out;
  VectorField sum(g);
  for (std::size_t i = 0; i < g.n; ++i) sum[i] = sol.w[i] + eta[i];
  const auto m = MagnetizationField::normalized(std::move(sum));
  const auto fd = decompose(sol, m);
  out.eta_h1 = fd.eta_h1;
  if (out.eta_h1 > 0.3) throw std::invalid_argument("expansion check: |eta|_H1 exceeds 0.3");

  const double h0 = sol.h0;
  out.lhs = energy(m, h0).total - energy(sol.w, h0).total;

  // Tangent v and second derivative -|v|^2 w of the frame curve at t = 0.
  const std::size_t n = g.n;
  std::vector<Vec3> v(n), acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = fd.nu[i] * sol.n[i] + fd.rho[i] * e3;
    acc[i] = -norm2(v[i]) * sol.w[i];
  }
  const auto grad = energy_gradient(sol.w, h0);
  double first = 0.0, curve = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    first += dot(grad[i], v[i]);
    curve += dot(grad[i], acc[i]);
  }
  double hess = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    hess += norm2(v[j + 1] - v[j]) / g.dx;
    hess += 0.5 * g.dx * aniso_hessian_form(sol.w[j] + sol.w[j + 1], v[j] + v[j + 1]);
  }
  out.rhs = first + 0.5 * (curve + hess);
  out.gap = std::abs(out.lhs - out.rhs);

  ScalarField l1nu = second_derivative_neumann(fd.nu);
  ScalarField l2rho = second_derivative_neumann(fd.rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(sol.theta[i]);
    const double s = std::sin(sol.theta[i]);
    const double v1 = 1.0 - 2.0 * s * s + h0 * c;
    const double v2 = v1 - 2.0 * h0 * (1.0 - c);
    l1nu[i] = -l1nu[i] + v1 * fd.nu[i];
    l2rho[i] = -l2rho[i] + v2 * fd.rho[i];
  }
  out.rhs_quadratic_form = 0.5 * (inner(l1nu, fd.nu) + inner(l2rho, fd.rho));
  return out;
}

}  // namespace llgwire
