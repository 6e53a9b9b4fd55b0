#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llgwire/llg.hpp"
#include "llgwire/perturbation.hpp"

namespace llgwire {

enum class InitKind { Stationary, Perturbed, File, FieldOff };
enum class Outcome { CollapseE1, Expanding2DW, StationaryDrift, EnergyTo4, None };

const char* to_string(InitKind k);
const char* to_string(Outcome o);
InitKind init_kind_from_string(const std::string& s);
Outcome outcome_from_string(const std::string& s);

struct Scenario {
  std::string name;
  double half_length = 15.0;
  double dx = 0.2;
  SimulationConfig config;  // config.grid is rebuilt from half_length/dx
  InitKind init = InitKind::Stationary;
  /// Field intensity of the stationary profile used as (the base of) the
  /// initial state. Equals config.h0 except for field-off runs.
  double profile_h0 = 0.0;
  PerturbationSpec perturbation;
  std::string init_file;
  bool probe_orbit = false;
  Outcome expected = Outcome::None;
  double snapshot_every = 1.0;

  /// Rebuilds config.grid and snapshot times; validates. Throws
  /// std::invalid_argument on inconsistencies.
  void finalize();
};

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

/// fig3 ... fig8 and "stationary".
std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

/// key=value override (h0, alpha, dt, dx, L, t_end, eps0, direction,
/// profile_h0, record_every, probe_orbit, snapshot_every). Call finalize()
/// once all overrides are in.
void apply_override(Scenario& s, const std::string& assignment);

struct VerdictThresholds {
  double collapse_tol = 0.05;
  double affine_r2 = 0.99;
  double affine_t0 = 5.0;
  double affine_t1 = 13.0;
  double widening_min = 0.5;  // growth of |{m1 < 0}| between the first and last record
  double energy4_lo = 3.8;
  double energy4_hi = 4.2;
  double drift_tol = 1e-2;
  double monotone_tol = 1e-10;
};

VerdictThresholds thresholds_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerdictThresholds& t);

struct Verdict {
  std::string status;  // "pass", "fail" or "indeterminate"
  std::string outcome;
  std::map<std::string, double> metrics;
  std::string note;
};

struct ScenarioResult {
  Scenario scenario;
  std::optional<RunRecord> record;
  Verdict verdict;
  double initial_gap = 0.0;  // E_{h0}(m0) - E_{h0}(w) for perturbed runs
};

/// Initial state for a scenario (and the stationary solution it is built on).
MagnetizationField build_initial_state(const Scenario& s, StationarySolution* base = nullptr,
                                       double* gap = nullptr);

/// Builds initial data, evolves, and evaluates the expected outcome. A
/// blow-up is caught and turned into an "indeterminate" verdict.
ScenarioResult run_scenario(const Scenario& s, const VerdictThresholds& th = {});

/// Writes manifest.json, series.csv, snap_t*.csv and verdict.json.
void persist_run(const ScenarioResult& r, const std::filesystem::path& dir, const VerdictThresholds& th);

nlohmann::json to_json(const Verdict& v);

Verdict evaluate(const Scenario& s, const RunRecord& rec, const MagnetizationField& m0,
                 const VerdictThresholds& th);

// --- helpers shared with the acceptance suite ---------------------------------

/// Measure of {m1 < 0} (trapezoid on the sign indicator).
double negative_region_width(const MagnetizationField& m);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Max over records of E_{h0}(t_{k+1}) - E_{h0}(t_k).
double max_energy_increase(const RunRecord& rec);

struct RateMatch {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};
/// Compares the central-difference energy slope with -alpha int|m^H|^2 at
/// interior records where |slope| > min_slope.
RateMatch dissipation_rate_match(const RunRecord& rec, double alpha, double min_slope = 1e-4);

// --- escape law ------------------------------------------------------------------

struct EscapeRow {
  double epsilon0 = 0.0;
  double gap = 0.0;
  double initial_distance = 0.0;
  std::optional<double> t_star;
  double growth_rate = 0.0;  // slope of log(orbital distance), the empirical lambda^2
  double lambda = 0.0;       // sqrt(growth_rate)
  double fit_r2 = 0.0;
  std::size_t fit_points = 0;
  double bound = 0.0;  // (1/lambda^2) ln(eps_op / (lambda |gap|))
};

struct EscapeReport {
  double epsilon_op = 1.0;
  std::vector<EscapeRow> rows;
  /// For consecutive halvings: t*(eps/2) - t*(eps) and ln4/lambda^2 with
  /// lambda^2 the mean growth rate of the pair.
  std::vector<double> shifts;
  std::vector<double> predicted_shifts;
  double max_shift_rel_error = 0.0;
  double lambda_spread = 0.0;  // (max - min)/mean of lambda
  double min_fit_r2 = 0.0;
  bool all_gaps_negative = false;
  bool monotone = false;
};

struct EscapeOptions {
  double h0 = 0.1;
  std::vector<double> eps0 = {0.2, 0.1, 0.05, 0.025};
  double epsilon_op = 1.0;
  double alpha = 1.0;
  double half_length = 15.0;
  double dx = 0.2;
  double dt = 5e-5;
  double t_max = 60.0;
  std::size_t record_every = 1000;
};

/// Throws std::runtime_error when fewer than 3 runs reach epsilon_op.
EscapeReport escape_time_vs_bound(const EscapeOptions& opt);

// --- profile sweeps ----------------------------------------------------------------

struct SweepEntry {
  double h0 = 0.0;
  bool ok = false;
  std::string error;
  std::optional<StationarySolution> solution;
};

std::vector<double> default_sweep_h0();
std::vector<SweepEntry> sweep_stationary(const std::vector<double>& h0s, double half_length, double dx);

}  // namespace llgwire
