#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "llgwire/energetics.hpp"
#include "llgwire/grid.hpp"
#include "llgwire/stationary.hpp"

namespace llgwire {

struct SimulationConfig {
  Grid grid;
  double h0 = 0.0;
  double alpha = 1.0;
  double dt = 5e-5;
  double t_end = 1.0;
  std::size_t record_every = 2000;
  bool renormalize = true;
  /// Times at which full snapshots are kept (snapped to the nearest step).
  std::vector<double> snapshot_times;

  std::size_t step_count() const;
  /// Throws std::invalid_argument when alpha <= 0, dt <= 0, t_end <= 0,
  /// record_every == 0, or dt > dx^2/4.
  void validate() const;
};

struct RunRecord {
  std::vector<double> times;
  std::vector<EnergyBreakdown> energies;
  std::vector<double> orbital_distance;  // NaN when the probe is off
  std::vector<double> min_m1;
  std::vector<double> max_m1;
  std::vector<double> max_norm_defect;   // nonzero only without renormalization
  std::vector<std::pair<double, MagnetizationField>> snapshots;
  MagnetizationField final_state;
  std::size_t steps_taken = 0;
};

/// Raised when a step loses more than half of a vector's length or a
/// recorded state turns non-finite. Carries everything recorded so far,
/// with final_state set to the last good state.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::shared_ptr<RunRecord> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunRecord& partial() const { return *partial_; }

 private:
  std::shared_ptr<RunRecord> partial_;
};

/// m ^ H - alpha m ^ (m ^ H).
VectorField rhs(const MagnetizationField& m, double h0, double alpha);

/// Fused (OpenMP) explicit step. Always projects the result onto the sphere.
MagnetizationField step(const MagnetizationField& m, const SimulationConfig& cfg);

/// The same step assembled from effective_field and rhs, kept as the
/// reference the fused kernel is tested against.
MagnetizationField step_reference(const MagnetizationField& m, const SimulationConfig& cfg);

struct Probes {
  /// Computes orbital_distance to this solution at every record when set.
  const StationarySolution* orbit_reference = nullptr;
  /// Called after every record with (time, state).
  std::function<void(double, const MagnetizationField&)> on_record;
  /// Checked after every record; returning true ends the run early.
  std::function<bool(const RunRecord&)> stop_after_record;
};

RunRecord evolve(const MagnetizationField& m0, const SimulationConfig& cfg, const Probes& probes = {});

}  // namespace llgwire
