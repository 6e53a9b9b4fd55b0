#pragma once

#include <complex>
#include <string>
#include <vector>

#include "llgwire/grid.hpp"
#include "llgwire/stationary.hpp"
#include "llgwire/tridiagonal.hpp"

namespace llgwire {

enum class OperatorKind { L1, L2, Custom };

const char* to_string(OperatorKind k);

/// -d^2/dx^2 + V on the interior nodes of a grid with homogeneous Dirichlet
/// conditions at +-L. Eigenfunctions are zero-padded back to the full grid.
struct TridiagonalOperator {
  Grid grid;
  OperatorKind kind = OperatorKind::Custom;
  std::vector<double> potential;  // V at every node
  SymTridiagonal matrix;          // interior block: d_i = 2/dx^2 + V_i, e_i = -1/dx^2
  double h0 = 0.0;
  /// Expected kernel element (d theta/dx for L1, sin theta for L2), empty for Custom.
  std::vector<double> kernel_candidate;

  /// A f on the full grid (f at the two end nodes is treated as 0; output
  /// is 0 there).
  ScalarField apply(const ScalarField& f) const;
};

/// Potentials 1 - 2 sin^2 theta + h0 cos theta and L1's minus 2 h0 (1 - cos theta).
ScalarField schrodinger_potential(const StationarySolution& sol, OperatorKind which);

TridiagonalOperator build_operator(const StationarySolution& sol, OperatorKind which);
TridiagonalOperator make_schrodinger(const Grid& grid, std::vector<double> potential,
                                     OperatorKind kind = OperatorKind::Custom, double h0 = 0.0);

struct SpectralReport {
  std::string tag;                       // "L1", "L2", "custom" or "linearized"
  std::vector<double> eigenvalues;       // self-adjoint case, nondecreasing
  std::vector<ScalarField> eigenfunctions;  // unit grid-L2 norm
  std::vector<double> residuals;         // |A v - lambda v|_2 / |v|_2 per pair
  std::vector<std::pair<double, double>> brackets;  // bisection intervals
  /// Lowest eigenvalue below -4|h0| (L1/L2 only). Informational: the bound
  /// is only established for h0 > 0.
  bool lower_bound_violated = false;

  // Linearized operator
  std::vector<std::complex<double>> complex_eigenvalues;  // smallest real parts, refined
  /// Eigenvectors as (first block, second block) on the full grid.
  std::vector<std::vector<std::complex<double>>> complex_eigenvectors;
  std::size_t negative_real_part_count = 0;  // beyond the near-kernel band, reported only
  double near_kernel_band = 0.0;
  /// Median over eigenvalues with Re > 2 alpha (1 + h0) of ||Im/Re| - 1/alpha|.
  double ray_deviation = 0.0;
  std::size_t ray_sample_count = 0;
  std::vector<std::complex<double>> all_eigenvalues;

  std::vector<double> kernel_residuals;
  double essential_spectrum_floor = 0.0;  // 1 + h0
};

/// k (1..8) smallest eigenpairs by Sturm bisection and inverse iteration.
/// Throws std::invalid_argument for k outside [1, 8] and
/// EigenConvergenceError when inverse iteration stalls.
SpectralReport lowest_eigenpairs(const TridiagonalOperator& op, std::size_t k);

/// |A c|_2 / |c|_2. Throws std::invalid_argument for a zero candidate.
double kernel_residual(const TridiagonalOperator& op, const ScalarField& candidate);

/// Spectrum of the block operator [[alpha L1, -L2], [L1, alpha L2]] on the
/// Dirichlet interior. The full spectrum comes from a dense real
/// eigensolver; the k eigenvalues of smallest real part are then polished
/// by shifted inverse iteration (at most 200 iterations, else
/// std::runtime_error). kernel_residuals holds |M^T v|/|v| for
/// v = (alpha, 1) d theta/dx and v = (-1, alpha) sin theta.
/// Throws std::invalid_argument for alpha <= 0 or more than 301 nodes.
SpectralReport linearized_spectrum(const StationarySolution& sol, double alpha, std::size_t k);

}  // namespace llgwire
