#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "llgwire/grid.hpp"
#include "llgwire/stationary.hpp"

namespace llgwire {

enum class Direction {
  Explicit,       // d_x theta for h0 > 0, sin theta for h0 < 0
  Eigenfunction,  // eigenvector of the negative eigenvalue (L2 for h0 > 0, L1 for h0 < 0)
  ExplicitRaw,    // same fields as Explicit, left unnormalized
};

const char* to_string(Direction d);  // "explicit", "eigen", "explicit_raw"
Direction direction_from_string(const std::string& s);

struct PerturbationSpec {
  double h0 = 0.0;
  double epsilon0 = 0.1;
  Direction direction = Direction::Explicit;
};

struct InitialData {
  MagnetizationField m0;
  ScalarField d;    // direction profile (unit grid-L2 unless ExplicitRaw)
  ScalarField phi;  // Phi = -eps0 d^2 / (1 + sqrt(1 - eps0^2 d^2))
  double d_sup = 0.0;
  double energy_gap = 0.0;  // E_{h0}(m0) - E_{h0}(w)
};

class EnergyNotLoweredError : public std::runtime_error {
 public:
  EnergyNotLoweredError(const std::string& what, double gap) : std::runtime_error(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

/// The direction profile d, unit grid-L2 except for ExplicitRaw.
ScalarField perturbation_direction(const StationarySolution& sol, Direction direction);

/// m0 = w + eps0 (d e3 + Phi w) for h0 > 0 and m0 = w + eps0 (d n + Phi w)
/// for h0 in (-1, 0). Throws std::invalid_argument when eps0 = 0, h0 = 0,
/// spec.h0 differs from sol.h0, or |eps0| |d|_inf >= 1/2, and
/// EnergyNotLoweredError when E_{h0}(m0) >= E_{h0}(w).
InitialData build_initial_data(const StationarySolution& sol, const PerturbationSpec& spec);

/// E_{h0}(m0) - E_{h0}(w_{h0}).
double energy_gap(const StationarySolution& sol, const MagnetizationField& m0);

/// m + amplitude * (uniform tangent noise), renormalized. Seeded, so
/// reproducible.
MagnetizationField tangent_noise(const MagnetizationField& m, double amplitude, std::uint64_t seed);

}  // namespace llgwire
