#include "llgwire/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <omp.h>

namespace llgwire::kernels {

namespace {

inline Vec3 aniso_grad(const Vec3& s) {
  const double s2 = norm2(s);
  const double a = (s.y * s.y + s.z * s.z) / s2;
  const Vec3 ps{0.0, s.y, s.z};
  return (2.0 / s2) * (ps - a * s);
}

}  // namespace

double llg_step(std::span<const Vec3> in, std::span<Vec3> out, const StepParams& p,
                std::size_t parallel_threshold) {
  const std::size_t n = in.size();
  const double inv = 1.0 / (p.dx * p.dx);
  const double h0 = p.h0, alpha = p.alpha, dt = p.dt;
  const bool renorm = p.renormalize;
  const Vec3* m = in.data();
  Vec3* o = out.data();

  // Nodes [lo, hi). Each cell gradient is evaluated once and carried to the
  // next node; blocks only recompute the cell on their left edge.
  auto block = [=](std::size_t lo, std::size_t hi) {
    double min_len = std::numeric_limits<double>::infinity();
    Vec3 left = lo > 0 ? aniso_grad(m[lo - 1] + m[lo]) : Vec3{};
    for (std::size_t i = lo; i < hi; ++i) {
      const Vec3& mi = m[i];
      Vec3 lap, a;
      if (i == 0) {
        left = aniso_grad(mi + m[1]);
        lap = inv * (2.0 * (m[1] - mi));
        a = -left;
      } else if (i + 1 == n) {
        lap = inv * (2.0 * (m[n - 2] - mi));
        a = -left;
      } else {
        const Vec3 right = aniso_grad(mi + m[i + 1]);
        lap = inv * (m[i - 1] - 2.0 * mi + m[i + 1]);
        a = -0.5 * (left + right);
        left = right;
      }
      Vec3 H = lap;
      const double normal = 1.0 - mi.x * mi.x;
      H += a - normal * mi;
      H.x += h0;
      const Vec3 mxh = cross(mi, H);
      const Vec3 rhs = mxh - alpha * cross(mi, mxh);
      const Vec3 next = mi + dt * rhs;
      const double len = norm(next);
      min_len = std::min(min_len, len);
      o[i] = renorm ? (1.0 / len) * next : next;
    }
    return min_len;
  };

  if (n < parallel_threshold) return block(0, n);
  double min_len = std::numeric_limits<double>::infinity();
#pragma omp parallel reduction(min : min_len)
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const auto nt = static_cast<std::size_t>(omp_get_num_threads());
    min_len = std::min(min_len, block(n * t / nt, n * (t + 1) / nt));
  }
  return min_len;
}

double h1_distance_sq_shifted(std::span<const Vec3> m, std::span<const Vec3> profile, std::ptrdiff_t offset,
                              double phi, double dx) {
  const std::size_t n = m.size();
  const double c = std::cos(phi), s = std::sin(phi);
  auto diff = [&](std::size_t i) {
    const Vec3& w = profile[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + offset)];
    return m[i] - Vec3{w.x, c * w.y - s * w.z, s * w.y + c * w.z};
  };
  double l2 = 0.0, d2 = 0.0;
  Vec3 prev = diff(0), cur = diff(1);
  l2 += 0.5 * dx * norm2(prev);
  d2 += 0.5 * dx * norm2((1.0 / dx) * (cur - prev));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec3 next = diff(i + 1);
    l2 += dx * norm2(cur);
    d2 += dx * norm2((0.5 / dx) * (next - prev));
    prev = cur;
    cur = next;
  }
  l2 += 0.5 * dx * norm2(cur);
  d2 += 0.5 * dx * norm2((1.0 / dx) * (cur - prev));
  return l2 + d2;
}

}  // namespace llgwire::kernels
