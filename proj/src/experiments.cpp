#include "llgwire/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "llgwire/io.hpp"
#include "llgwire/modulation.hpp"

namespace llgwire {

using nlohmann::json;

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::Stationary:
      return "stationary";
    case InitKind::Perturbed:
      return "perturbed";
    case InitKind::File:
      return "file";
    case InitKind::FieldOff:
      return "field_off";
  }
  return "stationary";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::CollapseE1:
      return "collapse_e1";
    case Outcome::Expanding2DW:
      return "expanding_2dw";
    case Outcome::StationaryDrift:
      return "stationary_drift";
    case Outcome::EnergyTo4:
      return "energy_to_4";
    case Outcome::None:
      return "none";
  }
  return "none";
}

InitKind init_kind_from_string(const std::string& s) {
  for (auto k : {InitKind::Stationary, InitKind::Perturbed, InitKind::File, InitKind::FieldOff}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown initial-data recipe '" + s + "'");
}

Outcome outcome_from_string(const std::string& s) {
  for (auto o : {Outcome::CollapseE1, Outcome::Expanding2DW, Outcome::StationaryDrift, Outcome::EnergyTo4,
                 Outcome::None}) {
    if (s == to_string(o)) return o;
  }
  throw std::invalid_argument("unknown expected outcome '" + s + "'");
}

void Scenario::finalize() {
  config.grid = make_grid(half_length, dx);
  if (init == InitKind::Perturbed) perturbation.h0 = profile_h0;
  if (init != InitKind::FieldOff && init != InitKind::File && profile_h0 != config.h0) {
    throw std::invalid_argument("scenario '" + name + "': profile_h0 must equal h0 unless the field is switched off");
  }
  config.snapshot_times.clear();
  if (snapshot_every > 0.0) {
    const auto count = static_cast<std::size_t>(std::floor(config.t_end / snapshot_every + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) config.snapshot_times.push_back(static_cast<double>(k) * snapshot_every);
  }
  config.validate();
}

json to_json(const Scenario& s) {
  return json{{"name", s.name},
              {"L", s.half_length},
              {"dx", s.dx},
              {"h0", s.config.h0},
              {"alpha", s.config.alpha},
              {"dt", s.config.dt},
              {"t_end", s.config.t_end},
              {"record_every", s.config.record_every},
              {"renormalize", s.config.renormalize},
              {"init", to_string(s.init)},
              {"profile_h0", s.profile_h0},
              {"eps0", s.perturbation.epsilon0},
              {"direction", to_string(s.perturbation.direction)},
              {"init_file", s.init_file},
              {"probe_orbit", s.probe_orbit},
              {"expected", to_string(s.expected)},
              {"snapshot_every", s.snapshot_every}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.half_length = j.at("L").get<double>();
  s.dx = j.at("dx").get<double>();
  s.config.h0 = j.at("h0").get<double>();
  s.config.alpha = j.at("alpha").get<double>();
  s.config.dt = j.at("dt").get<double>();
  s.config.t_end = j.at("t_end").get<double>();
  s.config.record_every = j.at("record_every").get<std::size_t>();
  s.config.renormalize = j.value("renormalize", true);
  s.init = init_kind_from_string(j.at("init").get<std::string>());
  s.profile_h0 = j.at("profile_h0").get<double>();
  s.perturbation.epsilon0 = j.value("eps0", 0.1);
  s.perturbation.direction = direction_from_string(j.value("direction", std::string("explicit")));
  s.init_file = j.value("init_file", std::string());
  s.probe_orbit = j.value("probe_orbit", false);
  s.expected = outcome_from_string(j.value("expected", std::string("none")));
  s.snapshot_every = j.value("snapshot_every", 1.0);
  s.finalize();
  return s;
}

std::vector<std::string> builtin_scenario_names() {
  return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "stationary"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.config.alpha = 1.0;
  s.config.dt = 5e-5;
  s.config.record_every = 2000;
  auto perturbed = [&](double h0, double eps0, double t_end, Outcome o) {
    s.config.h0 = h0;
    s.profile_h0 = h0;
    s.init = InitKind::Perturbed;
    s.perturbation.epsilon0 = eps0;
    s.config.t_end = t_end;
    s.expected = o;
  };
  auto field_off = [&](double profile_h0, double t_end, Outcome o) {
    s.config.h0 = 0.0;
    s.profile_h0 = profile_h0;
    s.init = InitKind::FieldOff;
    s.config.t_end = t_end;
    s.expected = o;
  };
  if (name == "fig3") {
    perturbed(0.1, 0.1, 13.0, Outcome::CollapseE1);
  } else if (name == "fig4") {
    perturbed(-0.1, -0.1, 13.0, Outcome::CollapseE1);
  } else if (name == "fig5") {
    perturbed(-0.1, 0.1, 13.0, Outcome::Expanding2DW);
  } else if (name == "fig6") {
    field_off(-0.1, 7.0, Outcome::CollapseE1);
  } else if (name == "fig7") {
    field_off(0.1, 30.0, Outcome::Expanding2DW);
  } else if (name == "fig8") {
    field_off(10.0, 30.0, Outcome::EnergyTo4);
  } else if (name == "stationary") {
    s.config.h0 = 0.1;
    s.profile_h0 = 0.1;
    s.init = InitKind::Stationary;
    s.config.t_end = 1.0;
    s.expected = Outcome::StationaryDrift;
  } else {
    throw std::invalid_argument("unknown builtin scenario '" + name + "'");
  }
  s.finalize();
  return s;
}

void apply_override(Scenario& s, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string val = assignment.substr(eq + 1);
  auto num = [&]() {
    std::size_t used = 0;
    const double v = std::stod(val, &used);
    if (used != val.size()) throw std::invalid_argument("override " + key + ": not a number");
    return v;
  };
  const bool ties_profile = s.init == InitKind::Stationary || s.init == InitKind::Perturbed;
  if (key == "h0") {
    s.config.h0 = num();
    if (ties_profile) s.profile_h0 = s.config.h0;
  } else if (key == "alpha") {
    s.config.alpha = num();
  } else if (key == "dt") {
    s.config.dt = num();
  } else if (key == "dx") {
    s.dx = num();
  } else if (key == "L") {
    s.half_length = num();
  } else if (key == "t_end") {
    s.config.t_end = num();
  } else if (key == "eps0") {
    s.perturbation.epsilon0 = num();
  } else if (key == "profile_h0") {
    s.profile_h0 = num();
  } else if (key == "record_every") {
    s.config.record_every = static_cast<std::size_t>(num());
  } else if (key == "snapshot_every") {
    s.snapshot_every = num();
  } else if (key == "probe_orbit") {
    s.probe_orbit = val == "1" || val == "true";
  } else if (key == "direction") {
    s.perturbation.direction = direction_from_string(val);
  } else {
    throw std::invalid_argument("unknown override key '" + key + "'");
  }
}

VerdictThresholds thresholds_from_json(const json& j) {
  VerdictThresholds t;
  t.collapse_tol = j.value("collapse_tol", t.collapse_tol);
  t.affine_r2 = j.value("affine_r2", t.affine_r2);
  t.affine_t0 = j.value("affine_t0", t.affine_t0);
  t.affine_t1 = j.value("affine_t1", t.affine_t1);
  t.widening_min = j.value("widening_min", t.widening_min);
  t.energy4_lo = j.value("energy4_lo", t.energy4_lo);
  t.energy4_hi = j.value("energy4_hi", t.energy4_hi);
  t.drift_tol = j.value("drift_tol", t.drift_tol);
  t.monotone_tol = j.value("monotone_tol", t.monotone_tol);
  return t;
}

json to_json(const VerdictThresholds& t) {
  return json{{"collapse_tol", t.collapse_tol}, {"affine_r2", t.affine_r2},       {"affine_t0", t.affine_t0},
              {"affine_t1", t.affine_t1},       {"widening_min", t.widening_min}, {"energy4_lo", t.energy4_lo},
              {"energy4_hi", t.energy4_hi},     {"drift_tol", t.drift_tol},       {"monotone_tol", t.monotone_tol}};
}

double negative_region_width(const MagnetizationField& m) {
  double w = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].x < 0.0) w += m.grid().weight(i);
  }
  return w;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.count = x.size();
  if (x.size() < 2 || x.size() != y.size()) return f;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

double max_energy_increase(const RunRecord& rec) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rec.energies.size(); ++k) {
    worst = std::max(worst, rec.energies[k].total - rec.energies[k - 1].total);
  }
  return worst;
}

RateMatch dissipation_rate_match(const RunRecord& rec, double alpha, double min_slope) {
  RateMatch r;
  for (std::size_t k = 1; k + 1 < rec.times.size(); ++k) {
    const double dt = rec.times[k + 1] - rec.times[k - 1];
    const double slope = (rec.energies[k + 1].total - rec.energies[k - 1].total) / dt;
    if (std::abs(slope) <= min_slope) continue;
    const double diss = alpha * rec.energies[k].dissipation_rate;
    r.max_rel_error = std::max(r.max_rel_error, std::abs(-slope - diss) / std::abs(slope));
    ++r.checked;
  }
  return r;
}

MagnetizationField build_initial_state(const Scenario& s, StationarySolution* base, double* gap) {
  const Grid& grid = s.config.grid;
  if (gap) *gap = 0.0;
  if (s.init == InitKind::File) {
    auto m = io::read_field_csv(s.init_file);
    if (!(m.grid() == grid)) {
      // Tolerate last-bit differences in dx from the file's x column.
      if (m.grid().n != grid.n || std::abs(m.grid().dx - grid.dx) > 1e-12 * grid.dx) {
        throw std::invalid_argument("initial-state file grid does not match the scenario grid");
      }
      m = MagnetizationField::normalized(VectorField(grid, m.values()));
    }
    if (base) *base = solve_theta(s.profile_h0, grid);
    return m;
  }
  auto sol = solve_theta(s.profile_h0, grid);
  MagnetizationField m0 = sol.w;
  if (s.init == InitKind::Perturbed) {
    PerturbationSpec spec = s.perturbation;
    spec.h0 = s.profile_h0;
    auto data = build_initial_data(sol, spec);
    if (gap) *gap = data.energy_gap;
    m0 = data.m0;
  }
  if (base) *base = std::move(sol);
  return m0;
}

Verdict evaluate(const Scenario& s, const RunRecord& rec, const MagnetizationField& m0, const VerdictThresholds& th) {
  Verdict v;
  v.outcome = to_string(s.expected);
  const auto& fin = rec.final_state;
  double dev = 0.0;
  for (const auto& x : fin.values()) dev = std::max(dev, std::abs(x.x - 1.0));
  v.metrics["final_max_abs_m1_minus_1"] = dev;
  v.metrics["final_time"] = rec.times.empty() ? 0.0 : rec.times.back();
  v.metrics["final_Etot"] = rec.energies.empty() ? 0.0 : rec.energies.back().total;
  v.metrics["max_energy_increase"] = max_energy_increase(rec);
  v.metrics["final_negative_width"] = negative_region_width(fin);
  v.metrics["initial_negative_width"] = negative_region_width(m0);

  const bool complete = !rec.times.empty() && std::abs(rec.times.back() - s.config.t_end) <= 0.5 * s.config.dt;
  if (!complete) {
    v.status = "indeterminate";
    v.note = "run ended before t_end";
    return v;
  }
  switch (s.expected) {
    case Outcome::CollapseE1:
      v.status = dev <= th.collapse_tol ? "pass" : "fail";
      break;
    case Outcome::EnergyTo4: {
      const double e = rec.energies.back().total;
      v.status = (e >= th.energy4_lo && e <= th.energy4_hi) ? "pass" : "fail";
      break;
    }
    case Outcome::StationaryDrift: {
      const double drift = h1_distance(fin, m0);
      v.metrics["h1_drift"] = drift;
      v.status = drift <= th.drift_tol ? "pass" : "fail";
      break;
    }
    case Outcome::Expanding2DW: {
      const double w0 = v.metrics["initial_negative_width"];
      const double w1 = v.metrics["final_negative_width"];
      bool ok = w1 - w0 >= th.widening_min;
      // Widening must also hold over the second half of the snapshots.
      if (rec.snapshots.size() >= 3) {
        const auto& mid = rec.snapshots[rec.snapshots.size() / 2].second;
        v.metrics["mid_negative_width"] = negative_region_width(mid);
        ok = ok && w1 >= v.metrics["mid_negative_width"];
      }
      if (s.config.h0 != 0.0) {
        std::vector<double> t, e;
        for (std::size_t k = 0; k < rec.times.size(); ++k) {
          if (rec.times[k] >= th.affine_t0 - 1e-9 && rec.times[k] <= th.affine_t1 + 1e-9) {
            t.push_back(rec.times[k]);
            e.push_back(rec.energies[k].total);
          }
        }
        if (t.size() < 5) {
          v.status = "indeterminate";
          v.note = "too few records in the affine-energy window";
          return v;
        }
        const auto fit = linear_fit(t, e);
        v.metrics["affine_slope"] = fit.slope;
        v.metrics["affine_r2"] = fit.r2;
        ok = ok && fit.slope < 0.0 && fit.r2 >= th.affine_r2;
      }
      v.status = ok ? "pass" : "fail";
      break;
    }
    case Outcome::None:
      v.status = "indeterminate";
      v.note = "no expected outcome";
      break;
  }
  return v;
}

ScenarioResult run_scenario(const Scenario& s, const VerdictThresholds& th) {
  ScenarioResult res;
  res.scenario = s;
  StationarySolution base;
  const auto m0 = build_initial_state(s, &base, &res.initial_gap);
  Probes probes;
  if (s.probe_orbit) probes.orbit_reference = &base;
  try {
    res.record = evolve(m0, s.config, probes);
    res.verdict = evaluate(s, *res.record, m0, th);
  } catch (const BlowUpError& e) {
    res.record = e.partial();
    res.verdict.status = "indeterminate";
    res.verdict.outcome = to_string(s.expected);
    res.verdict.note = e.what();
  }
  return res;
}

json to_json(const Verdict& v) {
  json m = json::object();
  for (const auto& [k, x] : v.metrics) m[k] = std::isfinite(x) ? json(x) : json(nullptr);
  return json{{"status", v.status}, {"outcome", v.outcome}, {"metrics", m}, {"note", v.note}};
}

void persist_run(const ScenarioResult& r, const std::filesystem::path& dir, const VerdictThresholds& th) {
  std::filesystem::create_directories(dir);
  json manifest{{"scenario", to_json(r.scenario)}, {"thresholds", to_json(th)}, {"initial_gap", r.initial_gap}};
  io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  if (r.record) {
    io::write_series_csv(dir / "series.csv", *r.record, r.scenario.config.alpha);
    for (const auto& [t, m] : r.record->snapshots) io::write_field_csv(dir / io::snapshot_name(t), m);
  }
  io::write_text(dir / "verdict.json", to_json(r.verdict).dump(2) + "\n");
}

EscapeReport escape_time_vs_bound(const EscapeOptions& opt) {
  EscapeReport rep;
  rep.epsilon_op = opt.epsilon_op;
  const Grid grid = make_grid(opt.half_length, opt.dx);
  const auto sol = solve_theta(opt.h0, grid);

  for (double eps : opt.eps0) {
    EscapeRow row;
    row.epsilon0 = eps;
    const auto data = build_initial_data(sol, {opt.h0, eps, Direction::Explicit});
    row.gap = data.energy_gap;
    SimulationConfig cfg;
    cfg.grid = grid;
    cfg.h0 = opt.h0;
    cfg.alpha = opt.alpha;
    cfg.dt = opt.dt;
    cfg.t_end = opt.t_max;
    cfg.record_every = opt.record_every;
    Probes probes;
    probes.orbit_reference = &sol;
    const double op = opt.epsilon_op;
    probes.stop_after_record = [op](const RunRecord& r) { return r.orbital_distance.back() >= op; };
    RunRecord rec;
    try {
      rec = evolve(data.m0, cfg, probes);
    } catch (const BlowUpError& e) {
      rec = e.partial();
    }
    row.initial_distance = rec.orbital_distance.front();
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
      if (rec.orbital_distance[k] >= op) {
        row.t_star = rec.times[k];
        break;
      }
    }
    std::vector<double> t, ld;
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
      const double d = rec.orbital_distance[k];
      if (d >= 2.0 * row.initial_distance && d <= op) {
        t.push_back(rec.times[k]);
        ld.push_back(std::log(d));
      }
    }
    const auto fit = linear_fit(t, ld);
    row.fit_points = t.size();
    if (t.size() >= 3 && fit.slope > 0.0) {
      row.growth_rate = fit.slope;
      row.lambda = std::sqrt(fit.slope);
      row.fit_r2 = fit.r2;
      row.bound = std::log(op / (row.lambda * std::abs(row.gap))) / row.growth_rate;
    }
    rep.rows.push_back(row);
  }

  std::size_t usable = 0;
  for (const auto& r : rep.rows) usable += (r.t_star && r.fit_points >= 3) ? 1 : 0;
  if (usable < 3) throw std::runtime_error("escape: fewer than 3 runs reached epsilon_op with a usable fit");

  rep.all_gaps_negative = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.gap < 0.0; });
  rep.monotone = true;
  rep.min_fit_r2 = 1.0;
  double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0, lsum = 0.0;
  std::size_t lcount = 0;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    if (r.fit_points >= 3) {
      rep.min_fit_r2 = std::min(rep.min_fit_r2, r.fit_r2);
      lmin = std::min(lmin, r.lambda);
      lmax = std::max(lmax, r.lambda);
      lsum += r.lambda;
      ++lcount;
    }
    if (k + 1 < rep.rows.size()) {
      const auto& q = rep.rows[k + 1];
      if (!r.t_star || !q.t_star) {
        rep.monotone = false;
        continue;
      }
      if (std::abs(q.epsilon0) < std::abs(r.epsilon0) && !(*q.t_star > *r.t_star)) rep.monotone = false;
      const double shift = *q.t_star - *r.t_star;
      const double rate = 0.5 * (r.growth_rate + q.growth_rate);
      const double predicted = std::log(4.0) / rate;
      rep.shifts.push_back(shift);
      rep.predicted_shifts.push_back(predicted);
      rep.max_shift_rel_error = std::max(rep.max_shift_rel_error, std::abs(shift - predicted) / predicted);
    }
  }
  rep.lambda_spread = lcount ? (lmax - lmin) / (lsum / static_cast<double>(lcount)) : 0.0;
  return rep;
}

std::vector<double> default_sweep_h0() { return {0.1, 0.5, 1.0, 2.0, 10.0, -0.1, -0.3, -0.5, -0.7, -0.9}; }

std::vector<SweepEntry> sweep_stationary(const std::vector<double>& h0s, double half_length, double dx) {
  const Grid grid = make_grid(half_length, dx);
  std::vector<SweepEntry> out;
  for (double h0 : h0s) {
    SweepEntry e;
    e.h0 = h0;
    try {
      e.solution = solve_theta(h0, grid);
      e.ok = true;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace llgwire
