#include "llgwire/perturbation.hpp"

#include <cmath>
#include <random>
#include <string>

#include "llgwire/energetics.hpp"
#include "llgwire/spectral.hpp"

namespace llgwire {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Explicit: return "explicit";
    case Direction::Eigenfunction: return "eigen";
    case Direction::ExplicitRaw: return "explicit_raw";
  }
  return "?";
}

Direction direction_from_string(const std::string& s) {
  if (s == "explicit") return Direction::Explicit;
  if (s == "eigen") return Direction::Eigenfunction;
  if (s == "explicit_raw") return Direction::ExplicitRaw;
  throw std::invalid_argument("direction must be explicit, eigen or explicit_raw (got '" + s + "')");
}

ScalarField perturbation_direction(const StationarySolution& sol, Direction direction) {
  const Grid& g = sol.grid();
  if (sol.h0 == 0.0) throw std::invalid_argument("perturbation: no unstable direction for h0 = 0");
  ScalarField d(g);
  if (direction != Direction::Eigenfunction) {
    for (std::size_t i = 0; i < g.n; ++i) d[i] = sol.h0 > 0.0 ? sol.dtheta[i] : sol.w[i].y;
  } else {
    const auto op = build_operator(sol, sol.h0 > 0.0 ? OperatorKind::L2 : OperatorKind::L1);
    const auto rep = lowest_eigenpairs(op, 1);
    if (!(rep.eigenvalues[0] < 0.0)) {
      throw std::runtime_error("perturbation: operator has no negative eigenvalue on this grid");
    }
    d = rep.eigenfunctions[0];
  }
  if (direction == Direction::ExplicitRaw) return d;
  const double l2 = norms(d).l2;
  for (auto& v : d.v) v /= l2;
  return d;
}

InitialData build_initial_data(const StationarySolution& sol, const PerturbationSpec& spec) {
  if (spec.epsilon0 == 0.0 || !std::isfinite(spec.epsilon0)) {
    throw std::invalid_argument("perturbation: epsilon0 must be finite and nonzero");
  }
  if (spec.h0 != sol.h0) throw std::invalid_argument("perturbation: spec.h0 differs from the solution's h0");
  const Grid& g = sol.grid();
  InitialData out;
  out.d = perturbation_direction(sol, spec.direction);
  for (double v : out.d.v) out.d_sup = std::max(out.d_sup, std::abs(v));
  const double eps = spec.epsilon0;
  if (!(std::abs(eps) * out.d_sup < 0.5)) {
    throw std::invalid_argument("perturbation: |eps0| |d|_inf = " + std::to_string(std::abs(eps) * out.d_sup) +
                                " must stay below 1/2");
  }
  out.phi = ScalarField(g);
  VectorField m(g);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double d = out.d[i];
    const double ed2 = eps * eps * d * d;
    const double phi = -eps * d * d / (1.0 + std::sqrt(1.0 - ed2));
    out.phi[i] = phi;
    const Vec3 dir = sol.h0 > 0.0 ? e3 : sol.n[i];
    m[i] = sol.w[i] + eps * (d * dir + phi * sol.w[i]);
  }
  out.m0 = MagnetizationField::from_unit(std::move(m), 1e-12);
  out.energy_gap = energy_gap(sol, out.m0);
  if (!(out.energy_gap < 0.0)) {
    throw EnergyNotLoweredError("perturbation: E_{h0}(m0) - E_{h0}(w) = " + std::to_string(out.energy_gap) +
                                    " is not negative; shrink epsilon0",
                                out.energy_gap);
  }
  return out;
}

double energy_gap(const StationarySolution& sol, const MagnetizationField& m0) {
  return energy(m0, sol.h0).total - energy(sol.w, sol.h0).total;
}

MagnetizationField tangent_noise(const MagnetizationField& m, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField out(m.grid());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3& v = m[i];
    // Any axis not parallel to v gives a tangent basis.
    const Vec3 axis = std::abs(v.x) < 0.9 ? e1 : e2;
    Vec3 t1 = cross(v, axis);
    t1 *= 1.0 / norm(t1);
    const Vec3 t2 = cross(v, t1);
    const double a = u(rng), b = u(rng);
    out[i] = v + amplitude * (a * t1 + b * t2);
  }
  return MagnetizationField::normalized(std::move(out));
}

}  // namespace llgwire
