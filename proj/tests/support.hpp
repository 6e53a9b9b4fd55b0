#pragma once

#include <cmath>
#include <numbers>

#include "llgwire/grid.hpp"

namespace testsupport {

// Stationary angle profiles in closed form. With phi = theta/2 the
// first-order profile equation separates and integrates to
//   h0 > 0:  theta = 2 atan2(k, -sqrt(h0) sinh(k x))
//   h0 < 0:  theta = 2 atan2(k, sqrt(-h0) cosh(k x))
// with k = sqrt(1 + h0). Both forms stay well conditioned in the tails.
inline double theta_exact(double h0, double x) {
  const double k = std::sqrt(1.0 + h0);
  if (h0 == 0.0) return 2.0 * std::atan(std::exp(x));
  if (h0 > 0.0) return 2.0 * std::atan2(k, -std::sqrt(h0) * std::sinh(k * x));
  return 2.0 * std::atan2(k, std::sqrt(-h0) * std::cosh(k * x));
}

// Independent fixed-step RK4 of phi' = s sin(phi) sqrt(cos^2 phi + h0) from x = 0
// (phi = pi/2 for h0 > 0, phi = theta_c/2 for h0 < 0, where the first-order
// form is degenerate so the first step uses the second-order form).
inline double theta_rk4(double h0, double x, double h) {
  if (h0 > 0.0) {
    auto f = [h0](double p) { return std::sin(p) * std::sqrt(std::cos(p) * std::cos(p) + h0); };
    double p = 0.5 * std::numbers::pi;
    const auto steps = static_cast<long>(std::llround(std::abs(x) / h));
    for (long s = 0; s < steps; ++s) {
      const double k1 = f(p), k2 = f(p + 0.5 * h * k1), k3 = f(p + 0.5 * h * k2), k4 = f(p + h * k3);
      p += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return x >= 0.0 ? 2.0 * p : 2.0 * std::numbers::pi - 2.0 * p;
  }
  // h0 < 0: second-order system for theta, which is regular at the turning point.
  double th = std::acos(-1.0 - 2.0 * h0), q = 0.0;
  auto acc = [h0](double t) { return std::sin(t) * (std::cos(t) + h0); };
  const auto steps = static_cast<long>(std::llround(std::abs(x) / h));
  for (long s = 0; s < steps; ++s) {
    const double a1 = q, b1 = acc(th);
    const double a2 = q + 0.5 * h * b1, b2 = acc(th + 0.5 * h * a1);
    const double a3 = q + 0.5 * h * b2, b3 = acc(th + 0.5 * h * a2);
    const double a4 = q + h * b3, b4 = acc(th + h * a3);
    th += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    q += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  return th;
}

inline double max_abs_diff(const llgwire::MagnetizationField& a, const llgwire::MagnetizationField& b,
                           std::size_t from = 0, std::size_t skip_tail = 0) {
  double m = 0.0;
  for (std::size_t i = from; i + skip_tail < a.size(); ++i) m = std::max(m, llgwire::norm(a[i] - b[i]));
  return m;
}

}  // namespace testsupport
