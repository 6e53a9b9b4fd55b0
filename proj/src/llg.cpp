#include "llgwire/llg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "llgwire/kernels.hpp"
#include "llgwire/modulation.hpp"

namespace llgwire {

std::size_t SimulationConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

void SimulationConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("config: t_end must be positive");
  if (record_every == 0) throw std::invalid_argument("config: record_every must be at least 1");
  if (grid.n < 3) throw std::invalid_argument("config: grid needs at least 3 nodes");
  if (dt > 0.25 * grid.dx * grid.dx) {
    throw std::invalid_argument("config: dt exceeds the explicit stability limit dx^2/4");
  }
}

VectorField rhs(const MagnetizationField& m, double h0, double alpha) {
  const VectorField H = effective_field(m, h0);
  VectorField out(m.grid());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 mxh = cross(m[i], H[i]);
    out[i] = mxh - alpha * cross(m[i], mxh);
  }
  return out;
}

namespace {

kernels::StepParams params_of(const SimulationConfig& cfg, bool renormalize) {
  return {cfg.grid.dx, cfg.h0, cfg.alpha, cfg.dt, renormalize};
}

void check_blowup(double min_len, double t) {
  if (!(min_len >= 0.5)) {
    throw std::runtime_error("step: |m + dt rhs| = " + std::to_string(min_len) + " < 0.5 at t = " +
                             std::to_string(t));
  }
}

}  // namespace

MagnetizationField step(const MagnetizationField& m, const SimulationConfig& cfg) {
  if (!(m.grid() == cfg.grid)) throw std::invalid_argument("step: state and config grids differ");
  VectorField out(cfg.grid);
  const double min_len = kernels::llg_step(m.values(), out.v, params_of(cfg, true));
  check_blowup(min_len, 0.0);
  return MagnetizationField::from_unit(std::move(out));
}

MagnetizationField step_reference(const MagnetizationField& m, const SimulationConfig& cfg) {
  const VectorField r = rhs(m, cfg.h0, cfg.alpha);
  VectorField next(m.grid());
  double min_len = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    next[i] = m[i] + cfg.dt * r[i];
    min_len = std::min(min_len, norm(next[i]));
  }
  check_blowup(min_len, 0.0);
  return MagnetizationField::normalized(std::move(next));
}

RunRecord evolve(const MagnetizationField& m0, const SimulationConfig& cfg, const Probes& probes) {
  cfg.validate();
  if (!(m0.grid() == cfg.grid)) throw std::invalid_argument("evolve: initial state and config grids differ");

  auto rec = std::make_shared<RunRecord>();
  const std::size_t nsteps = cfg.step_count();
  std::vector<std::size_t> snap_steps;
  for (double t : cfg.snapshot_times) {
    if (t < 0.0) continue;
    snap_steps.push_back(std::min(nsteps, static_cast<std::size_t>(std::llround(t / cfg.dt))));
  }
  std::sort(snap_steps.begin(), snap_steps.end());
  snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());
  std::size_t next_snap = 0;

  std::vector<Vec3> cur = m0.values(), nxt(cur.size());
  MagnetizationField last_good = m0;
  const auto params = params_of(cfg, cfg.renormalize);

  auto as_field = [&](const std::vector<Vec3>& v) {
    VectorField f(cfg.grid, v);
    return cfg.renormalize ? MagnetizationField::from_unit(std::move(f), 1e-12)
                           : MagnetizationField::normalized(std::move(f));
  };

  auto fail = [&](const std::string& why) {
    rec->final_state = last_good;
    throw BlowUpError(why, rec);
  };

  auto record = [&](std::size_t k) {
    const double t = static_cast<double>(k) * cfg.dt;
    for (const auto& v : cur) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
        fail("evolve: non-finite state at t = " + std::to_string(t));
      }
    }
    double defect = 0.0;
    for (const auto& v : cur) defect = std::max(defect, std::abs(norm(v) - 1.0));
    const MagnetizationField m = as_field(cur);
    const auto e = energy(m, cfg.h0);
    if (!std::isfinite(e.total) || !std::isfinite(e.dissipation_rate)) {
      fail("evolve: non-finite energy at t = " + std::to_string(t));
    }
    double lo = 1.0, hi = -1.0;
    for (const auto& v : m.values()) {
      lo = std::min(lo, v.x);
      hi = std::max(hi, v.x);
    }
    rec->times.push_back(t);
    rec->energies.push_back(e);
    rec->min_m1.push_back(lo);
    rec->max_m1.push_back(hi);
    rec->max_norm_defect.push_back(cfg.renormalize ? m.max_norm_defect() : defect);
    rec->orbital_distance.push_back(probes.orbit_reference
                                        ? orbital_distance(*probes.orbit_reference, m).distance
                                        : std::numeric_limits<double>::quiet_NaN());
    if (probes.on_record) probes.on_record(t, m);
    last_good = m;
  };

  auto maybe_snapshot = [&](std::size_t k) {
    while (next_snap < snap_steps.size() && snap_steps[next_snap] == k) {
      rec->snapshots.emplace_back(static_cast<double>(k) * cfg.dt, as_field(cur));
      ++next_snap;
    }
  };

  record(0);
  maybe_snapshot(0);
  for (std::size_t k = 1; k <= nsteps; ++k) {
    const double min_len = kernels::llg_step(cur, nxt, params);
    if (!(min_len >= 0.5)) {
      fail("evolve: |m + dt rhs| = " + std::to_string(min_len) + " < 0.5 at step " + std::to_string(k));
    }
    cur.swap(nxt);
    bool stop = false;
    if (k % cfg.record_every == 0 || k == nsteps) {
      record(k);
      stop = probes.stop_after_record && probes.stop_after_record(*rec);
    }
    maybe_snapshot(k);
    rec->steps_taken = k;
    if (stop) break;
  }
  rec->final_state = as_field(cur);
  return std::move(*rec);
}

}  // namespace llgwire
