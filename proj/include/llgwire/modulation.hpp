#pragma once

#include <stdexcept>

#include "llgwire/grid.hpp"
#include "llgwire/stationary.hpp"

namespace llgwire {

/// Element (y, phi) of R x R/2piZ acting by (g.m)(x) = R_phi m(x - y).
struct Gauge {
  double y = 0.0;
  double phi = 0.0;  // kept in (-pi, pi]

  Gauge() = default;
  Gauge(double y_, double phi_);
  /// |y| + dist(phi, 2 pi Z).
  double size() const;
  Gauge inverse() const { return {-y, -phi}; }
};

double wrap_angle(double phi);

/// Rotation is applied exactly. Shifts by a whole number of nodes copy
/// samples; other shifts interpolate each component with a cubic spline
/// (zero end slopes). Samples pulled from outside [-L, L] take the nearest
/// boundary value. The result is renormalized.
MagnetizationField apply_gauge(const MagnetizationField& m, const Gauge& g);

/// g.w_{h0} evaluated from the continuous profile (no interpolation error).
MagnetizationField gauge_orbit_point(const StationarySolution& sol, const Gauge& g);

struct FrameDecomposition {
  ScalarField mu;   // eta . w
  ScalarField nu;   // eta . n
  ScalarField rho;  // eta . e3
  double eta_h1 = 0.0;
  /// |m - w|_{H1} > 0.5, outside the regime where the frame estimates apply.
  bool beyond_regime = false;
};

/// Pointwise frame components of eta = m - w.
FrameDecomposition decompose(const StationarySolution& sol, const MagnetizationField& m);

struct GaugeFit {
  Gauge g;
  /// eta = (-g).m - w sampled at the shifted points x_i - y, i.e.
  /// eta_i = R_{-phi} m_i - w(x_i - y). This avoids interpolating m.
  VectorField eta;
  int iterations = 0;
  double residual = 0.0;      // |F(g)| at exit
  double constraint_dx = 0.0;  // sum_i w_i eta_i . d_x w(x_i - y)
  double constraint_rot = 0.0; // sum_i w_i eta_i . (e1 ^ w)(x_i - y)
};

class GaugeFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iteration on the two orthogonality constraints with the Jacobian
/// frozen at the base point, diag(|d_x theta|^2, -|sin theta|^2), starting
/// from g = (0, 0). Throws GaugeFitError without convergence (|F| <= tol)
/// after max_iter iterations.
GaugeFit fit_gauge(const StationarySolution& sol, const MagnetizationField& m, double tol = 1e-10,
                   int max_iter = 30);

struct OrbitalDistance {
  double distance = 0.0;
  Gauge argmin;
  /// The minimizer reached the edge of the |y| <= L/2 search window.
  bool touches_window_edge = false;
};

/// min over the gauge group of |m - g.w|_{H1}: a grid search over
/// y in [-L/2, L/2] (step dx) and 64 angles, refined by Nelder-Mead.
/// Always an upper bound on the true infimum.
OrbitalDistance orbital_distance(const StationarySolution& sol, const MagnetizationField& m);

}  // namespace llgwire
