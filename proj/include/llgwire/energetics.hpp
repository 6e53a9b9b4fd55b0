#pragma once

#include "llgwire/grid.hpp"
#include "llgwire/stationary.hpp"

namespace llgwire {

/// Discrete energy of a sampled magnetization.
///
///   E     = 1/2 sum_j |m_{j+1} - m_j|^2 / dx  +  1/2 sum_j dx a(m_j + m_{j+1})
///   E^Z   = -h0 sum_i w_i (m1_i - 1)          (trapezoid weights w_i)
///
/// with a(s) = (s2^2 + s3^2) / |s|^2, i.e. 1 - m1^2 evaluated at the
/// normalized cell midpoint. effective_field is the exact discrete gradient
/// of this energy (up to a normal component), so along the semi-discrete
/// flow dE_{h0}/dt = -alpha sum_i w_i |m_i ^ H_i|^2 holds exactly.
struct EnergyBreakdown {
  double exchange_anisotropy = 0.0;
  double zeeman = 0.0;
  double total = 0.0;
  /// int |m ^ H|^2, the alpha-free dissipation rate.
  double dissipation_rate = 0.0;
  /// False when |m1 -/+ 1| >= 0.1 at one of the ends (Zeeman integrand
  /// then depends on the truncation).
  bool boundary_ok = true;
};

/// H_i = (Neumann Laplacian)_i - m2 e2 - m3 e3 + h0 e1 up to O(dx^2) and
/// a component along m_i. Constant fields give exactly -m2 e2 - m3 e3 + h0 e1.
VectorField effective_field(const MagnetizationField& m, double h0);

EnergyBreakdown energy(const MagnetizationField& m, double h0);

/// alpha * int |m ^ H(m)|^2. Throws std::invalid_argument for alpha <= 0.
double dissipation(const MagnetizationField& m, double h0, double alpha);

struct ExpansionCheck {
  double lhs = 0.0;  // E_{h0}(m) - E_{h0}(w), m = (w + eta)/|w + eta|
  double rhs = 0.0;  // second-order Taylor model of the discrete energy along the frame curve
  double gap = 0.0;  // |lhs - rhs|
  /// 1/2 (<L1 nu, nu> + <L2 rho, rho>) with the Neumann three-point operators.
  double rhs_quadratic_form = 0.0;
  double eta_h1 = 0.0;
};

/// The frame components (nu, rho) of m - w define the curve
/// m(t) = w sqrt(1 - t^2 (nu^2 + rho^2)) + t (nu n + rho e3) with m(1) = m;
/// rhs is E'(0) + E''(0)/2 along it, so gap = O(|eta|^3).
/// Throws std::invalid_argument if |eta|_{H1} > 0.3.
ExpansionCheck quadratic_energy_expansion_check(const StationarySolution& sol, const VectorField& eta);

}  // namespace llgwire
