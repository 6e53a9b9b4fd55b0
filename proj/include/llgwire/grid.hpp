#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "llgwire/vec3.hpp"

namespace llgwire {

/// Uniform mesh on [-L, L]. Node i sits at (i - (n-1)/2) * dx, so the node
/// set is exactly symmetric and x = 0 is a node whenever n is odd.
struct Grid {
  double half_length = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  double x(std::size_t i) const {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * dx;
  }
  /// Trapezoid weight of node i.
  double weight(std::size_t i) const { return (i == 0 || i + 1 == n) ? 0.5 * dx : dx; }
  std::size_t center() const { return (n - 1) / 2; }

  bool operator==(const Grid&) const = default;
};

/// Throws std::invalid_argument for non-positive inputs or when 2L is not a
/// multiple of dx (relative mismatch above 1e-12).
Grid make_grid(double half_length, double dx);

struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.n, fill) {}
  ScalarField(const Grid& g, std::vector<double> values);

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

/// Unconstrained R^3-valued samples (effective fields, perturbations, rhs).
struct VectorField {
  Grid grid;
  std::vector<Vec3> v;

  VectorField() = default;
  explicit VectorField(const Grid& g, Vec3 fill = {}) : grid(g), v(g.n, fill) {}
  VectorField(const Grid& g, std::vector<Vec3> values);

  std::size_t size() const { return v.size(); }
  Vec3& operator[](std::size_t i) { return v[i]; }
  const Vec3& operator[](std::size_t i) const { return v[i]; }
};

/// Grid samples of a map into the unit sphere. Every constructor path
/// leaves |m_i| = 1 to within 1e-12.
class MagnetizationField {
 public:
  MagnetizationField() = default;

  /// Projects every sample onto the sphere. Throws std::domain_error on a
  /// (near-)zero or non-finite sample.
  static MagnetizationField normalized(VectorField f);
  /// Accepts samples that are already unit length within tol.
  static MagnetizationField from_unit(VectorField f, double tol = 1e-12);
  static MagnetizationField constant(const Grid& g, Vec3 direction);

  const Grid& grid() const { return field_.grid; }
  const std::vector<Vec3>& values() const { return field_.v; }
  const VectorField& field() const { return field_; }
  std::size_t size() const { return field_.v.size(); }
  const Vec3& operator[](std::size_t i) const { return field_.v[i]; }

  double max_norm_defect() const;

 private:
  explicit MagnetizationField(VectorField f) : field_(std::move(f)) {}
  VectorField field_;
};

ScalarField component(const VectorField& f, int k);
ScalarField component(const MagnetizationField& m, int k);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator-(const MagnetizationField& a, const MagnetizationField& b);

// --- discrete calculus -----------------------------------------------------

/// Three-point second difference with reflecting ghosts f_{-1} = f_1,
/// f_N = f_{N-2}. Requires n >= 3.
ScalarField second_derivative_neumann(const ScalarField& f);
VectorField laplacian_neumann(const VectorField& f);
VectorField laplacian_neumann(const MagnetizationField& m);

/// Central differences inside, one-sided two-point differences at the ends.
ScalarField first_derivative(const ScalarField& f);
VectorField first_derivative(const VectorField& f);

/// Trapezoid rule over [-L, L].
double integrate(const ScalarField& f);
double integrate(const Grid& g, std::span<const double> values);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

struct Norms {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// Discrete L2 and H1 = sqrt(L2^2 + |f'|_2^2).
Norms norms(const ScalarField& f);
Norms norms(const VectorField& f);

inline double h1_norm(const VectorField& f) { return norms(f).h1; }
inline double h1_distance(const MagnetizationField& a, const MagnetizationField& b) {
  return norms(a - b).h1;
}

}  // namespace llgwire
