#include "llgwire/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace llgwire {

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = d.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = d[i] * x[i];
    if (i > 0) s += e[i - 1] * x[i - 1];
    if (i + 1 < n) s += e[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

void SymTridiagonal::gerschgorin(double& lo, double& hi) const {
  const std::size_t n = d.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
}

std::size_t sturm_count(const SymTridiagonal& t, double x) {
  const std::size_t n = t.size();
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = t.d[0] - x;
  for (std::size_t i = 0;;) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (++i == n) break;
    q = t.d[i] - x - t.e[i - 1] * t.e[i - 1] / q;
  }
  return count;
}

double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, double* lo_out, double* hi_out) {
  if (k >= t.size()) throw std::invalid_argument("bisect_eigenvalue: index out of range");
  double lo, hi;
  t.gerschgorin(lo, hi);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * scale;
  hi += 1e-12 * scale;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * eps * scale * 1e-3) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (lo_out) *lo_out = lo;
  if (hi_out) *hi_out = hi;
  return 0.5 * (lo + hi);
}

namespace {

/// LU with partial pivoting of a tridiagonal matrix (dgttrf layout).
struct TridiagonalLU {
  std::vector<double> dl, d, du, du2;
  std::vector<unsigned char> swapped;

  TridiagonalLU(const SymTridiagonal& t, double shift, double pivot_floor) {
    const std::size_t n = t.size();
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.d[i] - shift;
    dl = t.e;
    du = t.e;
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = pivot_floor;
        const double f = dl[i] / d[i];
        dl[i] = f;
        d[i + 1] -= f * du[i];
      } else {
        const double f = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = f;
        const double tmp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = tmp - f * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -f * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    for (auto& p : d) {
      if (std::abs(p) < pivot_floor) p = std::copysign(pivot_floor, p == 0.0 ? 1.0 : p);
    }
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i] * b[i];
      } else {
        b[i + 1] -= dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;) {
      b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
  }
};

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda,
                                      const std::vector<std::vector<double>>& previous, double lo,
                                      double hi, int max_iter) {
  const std::size_t n = t.size();
  double glo, ghi;
  t.gerschgorin(glo, ghi);
  const double tnorm = std::max(std::abs(glo), std::abs(ghi));
  const double eps = std::numeric_limits<double>::epsilon();
  const TridiagonalLU lu(t, lambda, eps * tnorm);

  // Deterministic, non-symmetric start vector.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);

  const double tol = 1e3 * eps * tnorm;
  for (int it = 0; it < max_iter; ++it) {
    lu.solve(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : previous) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += q[i] * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    }
    const double nv = euclid(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) break;
    for (auto& x : v) x /= nv;
    auto r = t.apply(v);
    for (std::size_t i = 0; i < n; ++i) r[i] -= lambda * v[i];
    if (euclid(r) <= tol) return v;
  }
  throw EigenConvergenceError("inverse iteration did not converge in " + std::to_string(max_iter) +
                                  " iterations for eigenvalue in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]",
                              lo, hi);
}

}  // namespace llgwire
