#include "llgwire/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "llgwire/energetics.hpp"

namespace llgwire {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailClamp = 1e-14;
constexpr int kSubsteps = 16;

/// RK4 substeps per grid cell. The local error scales with (h k)^4 where
/// k = sqrt(1 + |h0|) is the stiffest linear rate, so the base count grows
/// with k^2 to keep the profile error well under 1e-9 for large fields.
int substeps_for(double h0) {
  const double k2 = 1.0 + std::abs(h0);
  return kSubsteps * static_cast<int>(std::ceil(k2 / 2.0));
}

/// sqrt(sin^2 t + 2 h0 (1 - cos t)) written as 2 |sin(t/2)| sqrt(cos^2(t/2) + h0),
/// which keeps full relative accuracy for small t.
double slope_magnitude(double t, double h0) {
  const double s = std::sin(0.5 * t);
  const double c = std::cos(0.5 * t);
  const double arg = c * c + h0;
  return 2.0 * std::abs(s) * std::sqrt(std::max(arg, 0.0));
}

template <typename F>
double rk4_scalar(F&& f, double u, double h) {
  const double k1 = f(u);
  const double k2 = f(u + 0.5 * h * k1);
  const double k3 = f(u + 0.5 * h * k2);
  const double k4 = f(u + h * k3);
  return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// theta'' = sin(theta) (cos(theta) + h0) as a first-order system.
void rk4_second_order(double& th, double& p, double h0, double h) {
  auto acc = [h0](double t) { return std::sin(t) * (std::cos(t) + h0); };
  const double k1t = p, k1p = acc(th);
  const double k2t = p + 0.5 * h * k1p, k2p = acc(th + 0.5 * h * k1t);
  const double k3t = p + 0.5 * h * k2p, k3p = acc(th + 0.5 * h * k2t);
  const double k4t = p + h * k3p, k4p = acc(th + h * k3t);
  th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
  p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

struct FineSamples {
  std::vector<double> dist;
  std::vector<double> slope;
};

/// h0 > 0. Integrates u = 2 pi - theta, u(0) = pi, u' = -slope_magnitude(u).
FineSamples integrate_positive(double h0, double h, std::size_t min_samples, std::size_t max_samples) {
  FineSamples out;
  auto f = [h0](double u) { return -slope_magnitude(u, h0); };
  double u = kPi;
  out.dist.push_back(u);
  out.slope.push_back(f(u));
  while (out.dist.size() < max_samples) {
    if (u == 0.0 && out.dist.size() >= min_samples) break;
    if (u != 0.0) {
      u = rk4_scalar(f, u, h);
      if (u < kTailClamp) u = 0.0;
    }
    out.dist.push_back(u);
    out.slope.push_back(u == 0.0 ? 0.0 : f(u));
  }
  return out;
}

/// h0 in (-1, 0). Second-order form from the turning point, first-order
/// form once theta has dropped below half of its maximum.
FineSamples integrate_negative(double h0, double h, std::size_t min_samples, std::size_t max_samples) {
  FineSamples out;
  const double theta_c = std::acos(-1.0 - 2.0 * h0);
  double th = theta_c;
  double p = 0.0;
  out.dist.push_back(th);
  out.slope.push_back(p);
  bool first_order = false;
  auto f = [h0](double t) { return -slope_magnitude(t, h0); };
  while (out.dist.size() < max_samples) {
    if (th == 0.0 && out.dist.size() >= min_samples) break;
    if (th != 0.0) {
      if (!first_order) {
        rk4_second_order(th, p, h0, h);
        if (th <= 0.5 * theta_c) first_order = true;
      } else {
        th = rk4_scalar(f, th, h);
      }
      if (th < kTailClamp) th = 0.0;
    }
    if (first_order || th == 0.0) p = (th == 0.0) ? 0.0 : f(th);
    out.dist.push_back(th);
    out.slope.push_back(p);
  }
  return out;
}

StationarySolution assemble(double h0, const Grid& grid, ThetaProfile profile, std::size_t fine_per_node,
                            const std::vector<double>* dist, const std::vector<double>* dslope) {
  StationarySolution sol;
  sol.h0 = h0;
  sol.theta = ScalarField(grid);
  sol.dtheta = ScalarField(grid);
  sol.lambda = ScalarField(grid);
  VectorField w(grid), n(grid);
  const std::size_t c = grid.center();
  const bool odd_n = (grid.n % 2) == 1;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    double th, dth, ct, st;
    if (dist != nullptr && odd_n) {
      // Node i sits exactly on fine sample |i - c| * fine_per_node.
      const std::size_t k = (i >= c ? i - c : c - i) * fine_per_node;
      const double u = (*dist)[k];
      const double du = (*dslope)[k];
      ct = std::cos(u);
      if (profile.kind() == ThetaProfile::Kind::OddAboutPi) {
        th = (i >= c) ? 2.0 * kPi - u : u;
        st = (i >= c) ? -std::sin(u) : std::sin(u);
        dth = -du;
      } else {
        th = u;
        st = std::sin(u);
        dth = (i >= c) ? du : -du;
      }
    } else {
      th = profile.theta(x);
      dth = profile.dtheta(x);
      ct = profile.cos_theta(x);
      st = profile.sin_theta(x);
    }
    sol.theta[i] = th;
    sol.dtheta[i] = dth;
    sol.lambda[i] = -2.0 * st * st + 3.0 * h0 * ct - 2.0 * h0;
    w[i] = {ct, st, 0.0};
    n[i] = {-st, ct, 0.0};
  }
  sol.w = MagnetizationField::normalized(std::move(w));
  sol.n = MagnetizationField::normalized(std::move(n));
  sol.profile = std::move(profile);

  // Continuous energy: density is even in x, Simpson on [0, L].
  const double L = grid.half_length;
  const std::size_t intervals = 2 * kSubsteps * std::max<std::size_t>(c, 1);
  const double h = L / static_cast<double>(intervals);
  auto density = [&](double x) {
    const double d = sol.profile.dtheta(x);
    const double s = sol.profile.sin_theta(x);
    const double one_minus_cos = 2.0 * std::pow(std::sin(0.5 * sol.profile.theta(x)), 2);
    return 0.5 * (d * d + s * s) + h0 * one_minus_cos;
  };
  double acc = density(0.0) + density(L);
  for (std::size_t k = 1; k < intervals; ++k) {
    acc += (k % 2 == 1 ? 4.0 : 2.0) * density(static_cast<double>(k) * h);
  }
  sol.energy_total = 2.0 * acc * h / 3.0;
  return sol;
}

}  // namespace

ThetaProfile ThetaProfile::domain_wall() { return ThetaProfile{}; }

ThetaProfile::ThetaProfile(Kind kind, double step, std::vector<double> dist, std::vector<double> slope)
    : kind_(kind), step_(step), dist_(std::move(dist)), slope_(std::move(slope)) {
  if (dist_.size() != slope_.size() || dist_.size() < 2 || !(step_ > 0.0)) {
    throw std::invalid_argument("ThetaProfile: inconsistent samples");
  }
}

void ThetaProfile::tail_distance(double x, double& dist, double& slope) const {
  const double ax = std::abs(x);
  const std::size_t last = dist_.size() - 1;
  const double pos = ax / step_;
  if (pos >= static_cast<double>(last)) {
    // Exponential continuation of the last sample.
    const double u = dist_[last];
    if (u == 0.0) {
      dist = 0.0;
      slope = 0.0;
      return;
    }
    const double rate = -slope_[last] / u;
    const double e = std::exp(-rate * (ax - static_cast<double>(last) * step_));
    dist = u * e;
    slope = slope_[last] * e;
    return;
  }
  const auto k = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(k);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double u0 = dist_[k], u1 = dist_[k + 1];
  const double s0 = slope_[k] * step_, s1 = slope_[k + 1] * step_;
  dist = h00 * u0 + h10 * s0 + h01 * u1 + h11 * s1;
  const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
  slope = (d00 * u0 + d10 * s0 + d01 * u1 + d11 * s1) / step_;
}

double ThetaProfile::theta(double x) const {
  switch (kind_) {
    case Kind::DomainWall:
      return x <= 0.0 ? 2.0 * std::atan(std::exp(x)) : kPi - 2.0 * std::atan(std::exp(-x));
    case Kind::OddAboutPi: {
      double u, s;
      tail_distance(x, u, s);
      return x >= 0.0 ? 2.0 * kPi - u : u;
    }
    case Kind::Even: {
      double u, s;
      tail_distance(x, u, s);
      return u;
    }
  }
  return 0.0;
}

double ThetaProfile::dtheta(double x) const {
  switch (kind_) {
    case Kind::DomainWall:
      return 1.0 / std::cosh(x);
    case Kind::OddAboutPi: {
      double u, s;
      tail_distance(x, u, s);
      return -s;
    }
    case Kind::Even: {
      double u, s;
      tail_distance(x, u, s);
      return x >= 0.0 ? s : -s;
    }
  }
  return 0.0;
}

double ThetaProfile::cos_theta(double x) const {
  if (kind_ == Kind::DomainWall) return -std::tanh(x);
  double u, s;
  tail_distance(x, u, s);
  return std::cos(u);
}

double ThetaProfile::sin_theta(double x) const {
  if (kind_ == Kind::DomainWall) return 1.0 / std::cosh(x);
  double u, s;
  tail_distance(x, u, s);
  return (kind_ == Kind::OddAboutPi && x >= 0.0) ? -std::sin(u) : std::sin(u);
}

double ThetaProfile::left_limit() const { return 0.0; }

double ThetaProfile::right_limit() const {
  switch (kind_) {
    case Kind::DomainWall:
      return kPi;
    case Kind::OddAboutPi:
      return 2.0 * kPi;
    case Kind::Even:
      return 0.0;
  }
  return 0.0;
}

StationarySolution domain_wall(const Grid& grid) {
  return assemble(0.0, grid, ThetaProfile::domain_wall(), 0, nullptr, nullptr);
}

StationarySolution solve_theta(double h0, const Grid& grid, double ode_tol) {
  if (!std::isfinite(h0)) throw std::invalid_argument("solve_theta: h0 must be finite");
  if (h0 <= -1.0) {
    throw std::invalid_argument("solve_theta: no non-constant stationary solution for h0 <= -1");
  }
  if (!(ode_tol > 0.0)) throw std::invalid_argument("solve_theta: ode_tol must be positive");
  if (h0 == 0.0) return domain_wall(grid);
  if (grid.n < 3 || grid.n % 2 == 0) {
    throw std::invalid_argument("solve_theta: grid needs an odd node count so that x = 0 is a node");
  }

  const int sub = substeps_for(h0);
  const double h = grid.dx / sub;
  const std::size_t c = grid.center();
  // Cover [0, 2L] so that gauge-shifted profiles can be evaluated.
  const std::size_t min_samples = 2 * c * static_cast<std::size_t>(sub) + 1;
  const std::size_t max_samples = min_samples;
  FineSamples fs = h0 > 0.0 ? integrate_positive(h0, h, min_samples, max_samples)
                            : integrate_negative(h0, h, min_samples, max_samples);
  const auto kind = h0 > 0.0 ? ThetaProfile::Kind::OddAboutPi : ThetaProfile::Kind::Even;
  std::vector<double> dist = fs.dist, slope = fs.slope;
  ThetaProfile profile(kind, h, std::move(fs.dist), std::move(fs.slope));
  auto sol = assemble(h0, grid, std::move(profile), sub, &dist, &slope);

  const double res = max_hamiltonian_residual(sol);
  if (!(res <= ode_tol)) {
    throw std::runtime_error("solve_theta: Hamiltonian residual " + std::to_string(res) +
                             " exceeds ode_tol");
  }
  return sol;
}

ScalarField hamiltonian_residual(const StationarySolution& sol) {
  ScalarField out(sol.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double th = sol.theta[i];
    const double d = sol.dtheta[i];
    const double s = std::sin(th);
    const double half = std::sin(0.5 * th);
    out[i] = 0.5 * (d * d - s * s - 4.0 * sol.h0 * half * half);
  }
  return out;
}

double max_hamiltonian_residual(const StationarySolution& sol) {
  const auto r = hamiltonian_residual(sol);
  double worst = 0.0;
  for (double v : r.v) worst = std::max(worst, std::abs(v));
  return worst;
}

TailRates tail_rate(const StationarySolution& sol) {
  const Grid& g = sol.grid();
  const double left_lim = sol.profile.left_limit();
  const double right_lim = sol.profile.right_limit();

  auto fit = [&](bool right, std::size_t& count) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    count = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const double x = g.x(i);
      if (right ? x <= 0.0 : x >= 0.0) continue;
      const double dev = std::abs(sol.theta[i] - (right ? right_lim : left_lim));
      if (dev < 1e-10 || dev > 1e-2) continue;
      const double ax = std::abs(x), ly = std::log(dev);
      sx += ax;
      sy += ly;
      sxx += ax * ax;
      sxy += ax * ly;
      ++count;
    }
    if (count < 20) {
      throw std::runtime_error(std::string("tail_rate: insufficient tail window on the ") +
                               (right ? "right" : "left") + " (" + std::to_string(count) + " nodes)");
    }
    const double nn = static_cast<double>(count);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return -slope;
  };

  TailRates r;
  r.left = fit(false, r.left_points);
  r.right = fit(true, r.right_points);
  return r;
}

double residual_stationarity(const StationarySolution& sol) {
  const auto H = effective_field(sol.w, sol.h0);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < H.size(); ++i) {
    worst = std::max(worst, norm(H[i] - sol.lambda[i] * sol.w[i]));
  }
  return worst;
}

ProfileMetrics profile_metrics(const StationarySolution& sol) {
  ProfileMetrics pm;
  pm.min_cos = 1.0;
  int transitions = sol.h0 == 0.0 ? 1 : 2;
  for (std::size_t i = 0; i < sol.grid().n; ++i) {
    const double c = sol.w[i].x;
    const double wgt = sol.grid().weight(i);
    if (c < 0.0) pm.plateau_width += wgt;
    if (std::abs(c) < 0.9) pm.transition_width += wgt;
    pm.min_cos = std::min(pm.min_cos, c);
    pm.max_dist_from_e1 = std::max(pm.max_dist_from_e1, norm(sol.w[i] - e1));
  }
  pm.transition_width /= transitions;
  return pm;
}

}  // namespace llgwire
