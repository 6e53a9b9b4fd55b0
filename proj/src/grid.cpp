#include "llgwire/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace llgwire {

Grid make_grid(double half_length, double dx) {
  if (!(half_length > 0.0) || !(dx > 0.0)) {
    throw std::invalid_argument("make_grid: L and dx must be positive");
  }
  const double cells = 2.0 * half_length / dx;
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::abs(rounded * dx - 2.0 * half_length) > 1e-12 * 2.0 * half_length) {
    throw std::invalid_argument("make_grid: 2L = " + std::to_string(2.0 * half_length) +
                                " is not a multiple of dx = " + std::to_string(dx));
  }
  return Grid{half_length, dx, static_cast<std::size_t>(rounded) + 1};
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
  if (v.size() != g.n) throw std::invalid_argument("ScalarField: size does not match grid");
}

VectorField::VectorField(const Grid& g, std::vector<Vec3> values) : grid(g), v(std::move(values)) {
  if (v.size() != g.n) throw std::invalid_argument("VectorField: size does not match grid");
}

MagnetizationField MagnetizationField::normalized(VectorField f) {
  for (auto& m : f.v) {
    const double r = norm(m);
    if (!std::isfinite(r) || r < 1e-300) {
      throw std::domain_error("MagnetizationField: cannot normalize a zero or non-finite sample");
    }
    m *= 1.0 / r;
  }
  return MagnetizationField(std::move(f));
}

MagnetizationField MagnetizationField::from_unit(VectorField f, double tol) {
  for (const auto& m : f.v) {
    if (!(std::abs(norm(m) - 1.0) <= tol)) {
      throw std::domain_error("MagnetizationField: sample off the unit sphere");
    }
  }
  return MagnetizationField(std::move(f));
}

MagnetizationField MagnetizationField::constant(const Grid& g, Vec3 direction) {
  return normalized(VectorField(g, direction));
}

double MagnetizationField::max_norm_defect() const {
  double worst = 0.0;
  for (const auto& m : field_.v) worst = std::max(worst, std::abs(norm(m) - 1.0));
  return worst;
}

ScalarField component(const VectorField& f, int k) {
  ScalarField out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i][k];
  return out;
}

ScalarField component(const MagnetizationField& m, int k) { return component(m.field(), k); }

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field difference on mismatched grids");
  VectorField out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

VectorField operator-(const MagnetizationField& a, const MagnetizationField& b) {
  return a.field() - b.field();
}

namespace {

template <typename T>
std::vector<T> second_difference(const std::vector<T>& f, double dx) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("second derivative needs at least 3 nodes");
  const double inv = 1.0 / (dx * dx);
  std::vector<T> out(n);
  out[0] = inv * (2.0 * (f[1] - f[0]));
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = inv * (f[i - 1] - 2.0 * f[i] + f[i + 1]);
  out[n - 1] = inv * (2.0 * (f[n - 2] - f[n - 1]));
  return out;
}

template <typename T>
std::vector<T> first_difference(const std::vector<T>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<T> out(n);
  if (n < 2) return out;
  out[0] = (1.0 / dx) * (f[1] - f[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (0.5 / dx) * (f[i + 1] - f[i - 1]);
  out[n - 1] = (1.0 / dx) * (f[n - 1] - f[n - 2]);
  return out;
}

}  // namespace

ScalarField second_derivative_neumann(const ScalarField& f) {
  return ScalarField(f.grid, second_difference(f.v, f.grid.dx));
}

VectorField laplacian_neumann(const VectorField& f) {
  return VectorField(f.grid, second_difference(f.v, f.grid.dx));
}

VectorField laplacian_neumann(const MagnetizationField& m) { return laplacian_neumann(m.field()); }

ScalarField first_derivative(const ScalarField& f) {
  return ScalarField(f.grid, first_difference(f.v, f.grid.dx));
}

VectorField first_derivative(const VectorField& f) {
  return VectorField(f.grid, first_difference(f.v, f.grid.dx));
}

double integrate(const Grid& g, std::span<const double> values) {
  if (values.size() != g.n) throw std::invalid_argument("integrate: size does not match grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += g.weight(i) * values[i];
  return sum;
}

double integrate(const ScalarField& f) { return integrate(f.grid, f.v); }

double inner(const ScalarField& a, const ScalarField& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.grid.weight(i) * a[i] * b[i];
  return sum;
}

double inner(const VectorField& a, const VectorField& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.grid.weight(i) * dot(a[i], b[i]);
  return sum;
}

Norms norms(const ScalarField& f) {
  const double l2sq = inner(f, f);
  const auto df = first_derivative(f);
  const double d2 = inner(df, df);
  return {std::sqrt(l2sq), std::sqrt(l2sq + d2)};
}

Norms norms(const VectorField& f) {
  const double l2sq = inner(f, f);
  const auto df = first_derivative(f);
  const double d2 = inner(df, df);
  return {std::sqrt(l2sq), std::sqrt(l2sq + d2)};
}

}  // namespace llgwire
