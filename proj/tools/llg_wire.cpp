// llg-wire: command line front end for the stationary-profile, spectral,
// evolution and scenario tools.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "llgwire/energetics.hpp"
#include "llgwire/experiments.hpp"
#include "llgwire/io.hpp"
#include "llgwire/llg.hpp"
#include "llgwire/modulation.hpp"
#include "llgwire/perturbation.hpp"
#include "llgwire/spectral.hpp"
#include "llgwire/stationary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace llgwire;

namespace {

constexpr int kExitFail = 2;
constexpr int kExitBlowUp = 3;

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

VerdictThresholds load_thresholds(const std::string& path) {
  if (path.empty()) return {};
  return thresholds_from_json(json::parse(io::read_text(path)));
}

int exit_code(const Verdict& v) {
  if (v.status == "fail") return kExitFail;
  if (v.status == "indeterminate" && v.note.find("evolve:") != std::string::npos) return kExitBlowUp;
  return 0;
}

/// builtin:stationary:<h0>, builtin:perturbed:<h0>:<eps0>, or a CSV path.
MagnetizationField resolve_init(const std::string& spec, const Grid& grid) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) != 0) {
    auto m = io::read_field_csv(spec);
    if (m.grid().n != grid.n) throw std::invalid_argument("--init file has a different node count");
    return MagnetizationField::normalized(VectorField(grid, m.values()));
  }
  std::vector<std::string> parts;
  std::stringstream ss(spec.substr(prefix.size()));
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.size() == 2 && parts[0] == "stationary") return solve_theta(std::stod(parts[1]), grid).w;
  if (parts.size() == 3 && parts[0] == "perturbed") {
    const double h0 = std::stod(parts[1]);
    const auto sol = solve_theta(h0, grid);
    return build_initial_data(sol, {h0, std::stod(parts[2]), Direction::Explicit}).m0;
  }
  throw std::invalid_argument("--init must be a CSV path, builtin:stationary:<h0> or builtin:perturbed:<h0>:<eps0>");
}

int run_and_persist(const Scenario& s, const fs::path& dir, const VerdictThresholds& th) {
  std::cerr << "running " << s.name << " (t_end = " << s.config.t_end << ", " << s.config.step_count()
            << " steps)\n";
  const auto res = run_scenario(s, th);
  persist_run(res, dir, th);
  std::cout << s.name << ": " << res.verdict.status << " (" << res.verdict.outcome << ")";
  if (!res.verdict.note.empty()) std::cout << " - " << res.verdict.note;
  std::cout << '\n';
  return exit_code(res.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D Landau-Lifshitz-Gilbert wire toolkit"};
  app.require_subcommand(1);

  double h0 = 0.1, L = 15.0, dx = 0.2, alpha = 1.0, dt = 5e-5, t_end = 1.0, eps0 = 0.1;
  std::size_t k = 4, record_every = 2000;
  std::string out, op = "L1", init, direction = "explicit", input, scenario, manifest, thresholds, eps_list,
                   h0_list;
  std::vector<std::string> overrides;
  bool all = false, probe_orbit = false;
  double eps_op = 1.0, t_max = 60.0;

  auto* st = app.add_subcommand("stationary", "stationary profile theta_{h0}");
  st->add_option("--h0", h0, "field intensity")->required();
  st->add_option("--L", L, "half length");
  st->add_option("--dx", dx, "grid spacing");
  st->add_option("--out", out, "profile CSV")->required();

  auto* sp = app.add_subcommand("spectrum", "L1, L2 or linearized spectrum");
  sp->add_option("--h0", h0)->required();
  sp->add_option("--op", op)->check(CLI::IsMember({"L1", "L2", "lin"}));
  sp->add_option("--k", k);
  sp->add_option("--alpha", alpha);
  sp->add_option("--L", L);
  sp->add_option("--dx", dx);
  sp->add_option("--out", out)->required();

  auto* ev = app.add_subcommand("evolve", "evolve an initial state");
  ev->add_option("--h0", h0)->required();
  ev->add_option("--alpha", alpha);
  ev->add_option("--L", L);
  ev->add_option("--dx", dx);
  ev->add_option("--dt", dt);
  ev->add_option("--t-end", t_end)->required();
  ev->add_option("--record-every", record_every);
  ev->add_option("--init", init, "profile CSV, builtin:stationary:<h0> or builtin:perturbed:<h0>:<eps0>")->required();
  ev->add_flag("--probe-orbit", probe_orbit, "record the orbital distance to w_{h0}");
  ev->add_option("--out", out, "run directory")->required();

  auto* pe = app.add_subcommand("perturb", "perturbed initial data");
  pe->add_option("--h0", h0)->required();
  pe->add_option("--eps0", eps0)->required();
  pe->add_option("--direction", direction)->check(CLI::IsMember({"explicit", "eigen", "explicit_raw"}));
  pe->add_option("--L", L);
  pe->add_option("--dx", dx);
  pe->add_option("--out", out, "m0 CSV")->required();

  auto* fg = app.add_subcommand("fit-gauge", "modulation analysis of a field file");
  fg->add_option("--h0", h0)->required();
  fg->add_option("--in", input, "x,m1,m2,m3 CSV")->required();

  auto* rn = app.add_subcommand("run", "run one scenario");
  rn->add_option("--scenario", scenario, "builtin scenario name");
  rn->add_option("--manifest", manifest, "manifest.json of a previous run");
  rn->add_option("--override", overrides, "key=value");
  rn->add_option("--thresholds", thresholds, "verdict thresholds JSON");
  rn->add_option("--out", out, "run directory");

  auto* su = app.add_subcommand("suite", "run builtin scenarios");
  su->add_flag("--all", all, "all builtin scenarios");
  su->add_option("--thresholds", thresholds);
  su->add_option("--out", out)->required();

  auto* es = app.add_subcommand("escape", "escape time versus perturbation size");
  es->add_option("--h0", h0);
  es->add_option("--eps", eps_list, "comma separated eps0 values");
  es->add_option("--eps-op", eps_op, "operational escape distance");
  es->add_option("--alpha", alpha);
  es->add_option("--t-max", t_max);
  es->add_option("--out", out, "table CSV");

  auto* sw = app.add_subcommand("sweep", "stationary profiles for several h0");
  sw->add_option("--h0", h0_list, "comma separated list (default: both standard lists)");
  sw->add_option("--L", L);
  sw->add_option("--dx", dx);
  sw->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (st->parsed()) {
      const auto sol = solve_theta(h0, make_grid(L, dx));
      io::write_profile_csv(out, sol);
      const auto pm = profile_metrics(sol);
      json meta{{"h0", h0},
                {"energy_total", sol.energy_total},
                {"max_hamiltonian_residual", max_hamiltonian_residual(sol)},
                {"plateau_width", pm.plateau_width},
                {"transition_width", pm.transition_width}};
      std::cout << meta.dump(2) << '\n';
      return 0;
    }
    if (sp->parsed()) {
      const auto sol = solve_theta(h0, make_grid(L, dx));
      SpectralReport rep;
      if (op == "lin") {
        rep = linearized_spectrum(sol, alpha, k);
      } else {
        rep = lowest_eigenpairs(build_operator(sol, op == "L1" ? OperatorKind::L1 : OperatorKind::L2), k);
      }
      io::write_spectrum_csv(out, rep);
      const fs::path base = fs::path(out).replace_extension();
      const std::size_t pairs = op == "lin" ? rep.complex_eigenvectors.size() : rep.eigenfunctions.size();
      for (std::size_t j = 0; j < pairs; ++j) {
        io::write_eigenfunction_csv(base.string() + "_ef" + std::to_string(j) + ".csv", rep, sol.grid(), j);
      }
      json meta{{"tag", rep.tag},
                {"kernel_residuals", rep.kernel_residuals},
                {"essential_spectrum_floor", rep.essential_spectrum_floor}};
      if (op == "lin") {
        meta["negative_real_part_count"] = rep.negative_real_part_count;
        meta["near_kernel_band"] = rep.near_kernel_band;
        meta["ray_deviation"] = rep.ray_deviation;
      } else {
        meta["eigenvalues"] = rep.eigenvalues;
        meta["lower_bound_violated"] = rep.lower_bound_violated;
        if (rep.lower_bound_violated) std::cerr << "note: lowest eigenvalue is below -4|h0|\n";
      }
      std::cout << meta.dump(2) << '\n';
      return 0;
    }
    if (ev->parsed()) {
      const Grid grid = make_grid(L, dx);
      SimulationConfig cfg;
      cfg.grid = grid;
      cfg.h0 = h0;
      cfg.alpha = alpha;
      cfg.dt = dt;
      cfg.t_end = t_end;
      cfg.record_every = record_every;
      for (double t = 0.0; t <= t_end + 1e-9; t += 1.0) cfg.snapshot_times.push_back(t);
      const auto m0 = resolve_init(init, grid);
      std::optional<StationarySolution> ref;
      Probes probes;
      if (probe_orbit) {
        ref = solve_theta(h0, grid);
        probes.orbit_reference = &*ref;
      }
      json manifest_json{{"command", "evolve"}, {"h0", h0}, {"alpha", alpha}, {"L", L}, {"dx", dx},
                         {"dt", dt},            {"t_end", t_end}, {"record_every", record_every},
                         {"init", init},        {"probe_orbit", probe_orbit}};
      fs::create_directories(out);
      io::write_text(fs::path(out) / "manifest.json", manifest_json.dump(2) + "\n");
      int code = 0;
      RunRecord rec;
      try {
        rec = evolve(m0, cfg, probes);
      } catch (const BlowUpError& e) {
        std::cerr << e.what() << '\n';
        rec = e.partial();
        io::write_field_csv(fs::path(out) / "last_good.csv", rec.final_state);
        code = kExitBlowUp;
      }
      io::write_series_csv(fs::path(out) / "series.csv", rec, alpha);
      for (const auto& [t, m] : rec.snapshots) io::write_field_csv(fs::path(out) / io::snapshot_name(t), m);
      return code;
    }
    if (pe->parsed()) {
      const auto sol = solve_theta(h0, make_grid(L, dx));
      const auto data = build_initial_data(
          sol, {h0, eps0, direction_from_string(direction)});
      io::write_field_csv(out, data.m0);
      json meta{{"h0", h0}, {"eps0", eps0}, {"direction", direction}, {"energy_gap", data.energy_gap},
                {"d_sup", data.d_sup}, {"h1_distance", h1_distance(data.m0, sol.w)}};
      io::write_text(fs::path(out).replace_extension(".json"), meta.dump(2) + "\n");
      std::cout << meta.dump(2) << '\n';
      return 0;
    }
    if (fg->parsed()) {
      const auto m = io::read_field_csv(input);
      const auto sol = solve_theta(h0, m.grid());
      json meta{{"h0", h0}, {"h1_distance_to_w", h1_distance(m, sol.w)}};
      const auto od = orbital_distance(sol, m);
      meta["orbital_distance"] = od.distance;
      meta["orbital_argmin"] = {{"y", od.argmin.y}, {"phi", od.argmin.phi}};
      meta["argmin_touches_window_edge"] = od.touches_window_edge;
      try {
        const auto fit = fit_gauge(sol, m);
        meta["fit_gauge"] = {{"y", fit.g.y},
                             {"phi", fit.g.phi},
                             {"iterations", fit.iterations},
                             {"eta_h1", norms(fit.eta).h1},
                             {"constraint_dx", fit.constraint_dx},
                             {"constraint_rot", fit.constraint_rot}};
      } catch (const GaugeFitError& e) {
        meta["fit_gauge"] = {{"error", e.what()}};
      }
      std::cout << meta.dump(2) << '\n';
      return 0;
    }
    if (rn->parsed()) {
      if (scenario.empty() == manifest.empty()) {
        std::cerr << "run: give exactly one of --scenario or --manifest\n";
        return 1;
      }
      Scenario s = manifest.empty() ? builtin_scenario(scenario)
                                    : scenario_from_json(json::parse(io::read_text(manifest)).at("scenario"));
      for (const auto& o : overrides) apply_override(s, o);
      s.finalize();
      auto th = load_thresholds(thresholds);
      if (thresholds.empty() && !manifest.empty()) {
        const auto mj = json::parse(io::read_text(manifest));
        if (mj.contains("thresholds")) th = thresholds_from_json(mj.at("thresholds"));
      }
      return run_and_persist(s, out.empty() ? fs::path("runs") / s.name : fs::path(out), th);
    }
    if (su->parsed()) {
      const auto th = load_thresholds(thresholds);
      int worst = 0;
      const auto names = builtin_scenario_names();
      (void)all;  // the builtin list is the whole suite
      for (const auto& name : names) worst = std::max(worst, run_and_persist(builtin_scenario(name), fs::path(out) / name, th));
      return worst;
    }
    if (es->parsed()) {
      EscapeOptions opt;
      opt.h0 = h0;
      opt.alpha = alpha;
      opt.epsilon_op = eps_op;
      opt.t_max = t_max;
      if (!eps_list.empty()) opt.eps0 = parse_list(eps_list);
      const auto rep = escape_time_vs_bound(opt);
      std::ostringstream csv;
      csv << "eps0,gap,initial_distance,t_star,growth_rate,lambda,fit_r2,bound\n";
      for (const auto& r : rep.rows) {
        csv << io::fmt(r.epsilon0) << ',' << io::fmt(r.gap) << ',' << io::fmt(r.initial_distance) << ','
            << io::fmt(r.t_star ? *r.t_star : NAN) << ',' << io::fmt(r.growth_rate) << ',' << io::fmt(r.lambda)
            << ',' << io::fmt(r.fit_r2) << ',' << io::fmt(r.bound) << '\n';
      }
      if (!out.empty()) io::write_text(out, csv.str());
      std::cout << csv.str();
      json summary{{"epsilon_op", rep.epsilon_op},
                   {"shifts", rep.shifts},
                   {"predicted_shifts_ln4", rep.predicted_shifts},
                   {"max_shift_rel_error", rep.max_shift_rel_error},
                   {"lambda_spread", rep.lambda_spread},
                   {"min_fit_r2", rep.min_fit_r2},
                   {"all_gaps_negative", rep.all_gaps_negative},
                   {"monotone", rep.monotone}};
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (sw->parsed()) {
      const auto list = h0_list.empty() ? default_sweep_h0() : parse_list(h0_list);
      int code = 0;
      for (const auto& e : sweep_stationary(list, L, dx)) {
        if (!e.ok) {
          std::cerr << "h0 = " << e.h0 << ": " << e.error << '\n';
          code = kExitFail;
          continue;
        }
        const std::string name = "profile_h0_" + io::fmt(e.h0) + ".csv";
        io::write_profile_csv(fs::path(out) / name, *e.solution);
        const auto pm = profile_metrics(*e.solution);
        std::cout << name << " plateau_width=" << pm.plateau_width << " transition_width=" << pm.transition_width
                  << " min_cos=" << pm.min_cos << '\n';
      }
      return code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
