#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace llgwire {

/// Symmetric tridiagonal matrix T with diagonal d and off-diagonal e
/// (e.size() == d.size() - 1).
struct SymTridiagonal {
  std::vector<double> d;
  std::vector<double> e;

  std::size_t size() const { return d.size(); }
  std::vector<double> apply(std::span<const double> x) const;
  /// Gerschgorin interval containing the whole spectrum.
  void gerschgorin(double& lo, double& hi) const;
};

/// Number of eigenvalues of T strictly below x (Sturm sequence of the LDL^T
/// pivots).
std::size_t sturm_count(const SymTridiagonal& t, double x);

/// The k-th smallest eigenvalue (k = 0, 1, ...) by bisection, to roughly
/// machine precision. lo/hi receive the final bracket.
double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, double* lo = nullptr,
                         double* hi = nullptr);

class EigenConvergenceError : public std::runtime_error {
 public:
  EigenConvergenceError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Inverse iteration for the eigenvector of `lambda`, re-orthogonalized
/// (two Gram-Schmidt passes) against `previous`, which must be
/// Euclidean-orthonormal. Returns a Euclidean unit vector. Throws
/// EigenConvergenceError (carrying [lo, hi]) after max_iter iterations.
std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda,
                                      const std::vector<std::vector<double>>& previous, double lo,
                                      double hi, int max_iter = 50);

}  // namespace llgwire
