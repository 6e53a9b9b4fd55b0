#pragma once

#include <vector>

#include "llgwire/grid.hpp"

namespace llgwire {

/// Continuous representation of a stationary angle profile theta(x),
/// evaluable at any x (cubic Hermite between fine integration samples,
/// closed form for the domain wall). Outside the integrated range the
/// profile is flat at its limit.
class ThetaProfile {
 public:
  enum class Kind {
    DomainWall,  // theta = 2 atan(e^x)
    OddAboutPi,  // h0 > 0: theta - pi odd, limits 0 and 2 pi
    Even,        // h0 in (-1, 0): theta even, limits 0 and 0
  };

  ThetaProfile() = default;
  static ThetaProfile domain_wall();
  /// `dist` holds the distance to the right limit at x = k*step (k >= 0),
  /// `slope` its x-derivative.
  ThetaProfile(Kind kind, double step, std::vector<double> dist, std::vector<double> slope);

  Kind kind() const { return kind_; }
  double theta(double x) const;
  double dtheta(double x) const;
  /// cos(theta), sin(theta) evaluated without cancellation in the tails.
  double cos_theta(double x) const;
  double sin_theta(double x) const;
  Vec3 w(double x) const { return {cos_theta(x), sin_theta(x), 0.0}; }
  Vec3 n(double x) const { return {-sin_theta(x), cos_theta(x), 0.0}; }

  double left_limit() const;
  double right_limit() const;

  // Fine samples (x = k * step, k >= 0); empty for the closed-form wall.
  double step() const { return step_; }
  std::size_t sample_count() const { return dist_.size(); }

 private:
  /// Distance from the limit approached as x -> sign(x) * infinity, and its
  /// slope with respect to |x|.
  void tail_distance(double x, double& dist, double& slope) const;

  Kind kind_ = Kind::DomainWall;
  double step_ = 0.0;
  std::vector<double> dist_;
  std::vector<double> slope_;
};

struct StationarySolution {
  double h0 = 0.0;
  ScalarField theta;
  ScalarField dtheta;
  MagnetizationField w;  // (cos theta, sin theta, 0)
  MagnetizationField n;  // (-sin theta, cos theta, 0)
  ScalarField lambda;    // -2 sin^2 theta + 3 h0 cos theta - 2 h0
  /// E_{h0} of the continuous profile on [-L, L] (Simpson on the fine
  /// samples). The discrete energy of `w` is energetics::energy.
  double energy_total = 0.0;
  ThetaProfile profile;

  const Grid& grid() const { return theta.grid; }
};

/// theta* = 2 atan(e^x), h0 = 0.
StationarySolution domain_wall(const Grid& grid);

/// Integrates the profile ODE from x = 0 with fixed RK4 substeps dx/16 and
/// reflects it onto x < 0.
///  - h0 > 0: first-order form from theta(0) = pi, theta'(0) = sqrt(4 h0).
///  - h0 in (-1, 0): second-order form from theta(0) = acos(-1 - 2 h0),
///    theta'(0) = 0, switching to the (then non-degenerate) first-order
///    form once theta <= theta(0)/2.
///  - h0 == 0 delegates to domain_wall.
/// Throws std::invalid_argument for h0 <= -1 or ode_tol <= 0, and
/// std::runtime_error if the Hamiltonian residual exceeds ode_tol.
StationarySolution solve_theta(double h0, const Grid& grid, double ode_tol = 1e-8);

/// Pointwise 1/2 (theta'^2 - sin^2 theta - 2 h0 (1 - cos theta)).
ScalarField hamiltonian_residual(const StationarySolution& sol);
double max_hamiltonian_residual(const StationarySolution& sol);

struct TailRates {
  double left = 0.0;
  double right = 0.0;
  std::size_t left_points = 0;
  std::size_t right_points = 0;
};

/// Least-squares decay exponent of |theta - limit| over the nodes with
/// deviation in [1e-10, 1e-2]. Throws std::runtime_error when either side
/// has fewer than 20 such nodes.
TailRates tail_rate(const StationarySolution& sol);

/// max over interior nodes of |H(w) - Lambda w| (discrete effective field).
double residual_stationarity(const StationarySolution& sol);

struct ProfileMetrics {
  double plateau_width = 0.0;     // measure of {m1 < 0}
  double transition_width = 0.0;  // measure of {|cos theta| < 0.9}, per transition
  double min_cos = 0.0;
  double max_dist_from_e1 = 0.0;  // sup |w - e1|
};

ProfileMetrics profile_metrics(const StationarySolution& sol);

}  // namespace llgwire
