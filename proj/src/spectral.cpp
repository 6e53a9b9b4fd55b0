#include "llgwire/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace llgwire {

const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::L1:
      return "L1";
    case OperatorKind::L2:
      return "L2";
    case OperatorKind::Custom:
      return "custom";
  }
  return "custom";
}

ScalarField TridiagonalOperator::apply(const ScalarField& f) const {
  if (!(f.grid == grid)) throw std::invalid_argument("operator applied to a field on another grid");
  const std::size_t n = grid.n;
  std::vector<double> interior(f.v.begin() + 1, f.v.end() - 1);
  const auto y = matrix.apply(interior);
  ScalarField out(grid);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = y[i - 1];
  return out;
}

ScalarField schrodinger_potential(const StationarySolution& sol, OperatorKind which) {
  ScalarField v(sol.grid());
  const double h0 = sol.h0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = sol.w[i].x;
    const double s = sol.w[i].y;
    double p = 1.0 - 2.0 * s * s + h0 * c;
    if (which == OperatorKind::L2) p -= 2.0 * h0 * (1.0 - c);
    v[i] = p;
  }
  return v;
}

TridiagonalOperator make_schrodinger(const Grid& grid, std::vector<double> potential, OperatorKind kind,
                                     double h0) {
  if (potential.size() != grid.n) throw std::invalid_argument("potential size does not match grid");
  if (grid.n < 3) throw std::invalid_argument("operator needs at least one interior node");
  TridiagonalOperator op;
  op.grid = grid;
  op.kind = kind;
  op.h0 = h0;
  const std::size_t m = grid.n - 2;
  const double inv = 1.0 / (grid.dx * grid.dx);
  op.matrix.d.resize(m);
  op.matrix.e.assign(m - 1, -inv);
  for (std::size_t i = 0; i < m; ++i) op.matrix.d[i] = 2.0 * inv + potential[i + 1];
  op.potential = std::move(potential);
  return op;
}

TridiagonalOperator build_operator(const StationarySolution& sol, OperatorKind which) {
  if (which == OperatorKind::Custom) throw std::invalid_argument("build_operator: choose L1 or L2");
  auto op = make_schrodinger(sol.grid(), schrodinger_potential(sol, which).v, which, sol.h0);
  if (which == OperatorKind::L1) {
    op.kernel_candidate = sol.dtheta.v;
  } else {
    op.kernel_candidate.resize(sol.grid().n);
    for (std::size_t i = 0; i < sol.grid().n; ++i) op.kernel_candidate[i] = sol.w[i].y;
  }
  return op;
}

double kernel_residual(const TridiagonalOperator& op, const ScalarField& candidate) {
  const std::size_t n = op.grid.n;
  double cc = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) cc += candidate[i] * candidate[i];
  if (!(cc > 0.0)) throw std::invalid_argument("kernel_residual: zero candidate");
  const auto a = op.apply(candidate);
  double aa = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) aa += a[i] * a[i];
  return std::sqrt(aa / cc);
}

namespace {

void fix_sign(std::vector<double>& v) {
  double sum = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  const double scale = *std::max_element(v.begin(), v.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  const bool flip = std::abs(sum) > 1e-8 * std::abs(scale) * std::sqrt(static_cast<double>(v.size()))
                        ? sum < 0.0
                        : v[arg] < 0.0;
  if (flip) {
    for (auto& x : v) x = -x;
  }
}

}  // namespace

SpectralReport lowest_eigenpairs(const TridiagonalOperator& op, std::size_t k) {
  if (k < 1 || k > 8) throw std::invalid_argument("lowest_eigenpairs: k must be in [1, 8]");
  const std::size_t m = op.matrix.size();
  if (k > m) throw std::invalid_argument("lowest_eigenpairs: k exceeds the interior dimension");
  SpectralReport rep;
  rep.tag = to_string(op.kind);
  rep.essential_spectrum_floor = 1.0 + op.h0;
  const double dx = op.grid.dx;
  std::vector<std::vector<double>> vecs;
  for (std::size_t j = 0; j < k; ++j) {
    double lo, hi;
    const double lambda = bisect_eigenvalue(op.matrix, j, &lo, &hi);
    auto v = inverse_iteration(op.matrix, lambda, vecs, lo, hi);
    fix_sign(v);
    auto r = op.matrix.apply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < m; ++i) res += (r[i] - lambda * v[i]) * (r[i] - lambda * v[i]);
    rep.eigenvalues.push_back(lambda);
    rep.residuals.push_back(std::sqrt(res));
    rep.brackets.emplace_back(lo, hi);
    ScalarField f(op.grid);
    const double scale = 1.0 / std::sqrt(dx);
    for (std::size_t i = 0; i < m; ++i) f[i + 1] = scale * v[i];
    rep.eigenfunctions.push_back(std::move(f));
    vecs.push_back(std::move(v));
  }
  if (!op.kernel_candidate.empty()) {
    rep.kernel_residuals.push_back(kernel_residual(op, ScalarField(op.grid, op.kernel_candidate)));
  }
  if (op.kind != OperatorKind::Custom && op.h0 != 0.0) {
    rep.lower_bound_violated = rep.eigenvalues[0] < -4.0 * std::abs(op.h0);
  }
  return rep;
}

SpectralReport linearized_spectrum(const StationarySolution& sol, double alpha, std::size_t k) {
  if (!(alpha > 0.0)) throw std::invalid_argument("linearized_spectrum: alpha must be positive");
  const Grid& g = sol.grid();
  if (g.n > 301) throw std::invalid_argument("linearized_spectrum: dense solve limited to N <= 301");
  if (k < 1) throw std::invalid_argument("linearized_spectrum: k must be positive");
  const auto l1 = build_operator(sol, OperatorKind::L1);
  const auto l2 = build_operator(sol, OperatorKind::L2);
  const std::size_t m = l1.matrix.size();
  const auto M = static_cast<Eigen::Index>(m);

  Eigen::MatrixXd A1 = Eigen::MatrixXd::Zero(M, M), A2 = Eigen::MatrixXd::Zero(M, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    A1(i, i) = l1.matrix.d[i];
    A2(i, i) = l2.matrix.d[i];
    if (i + 1 < M) {
      A1(i, i + 1) = A1(i + 1, i) = l1.matrix.e[i];
      A2(i, i + 1) = A2(i + 1, i) = l2.matrix.e[i];
    }
  }
  Eigen::MatrixXd B(2 * M, 2 * M);
  B << alpha * A1, -A2, A1, alpha * A2;

  SpectralReport rep;
  rep.tag = "linearized";
  rep.essential_spectrum_floor = 1.0 + sol.h0;

  // Transpose-kernel residuals.
  const Eigen::MatrixXd Bt = B.transpose();
  auto residual = [&](double a, double b, const std::vector<double>& f) {
    Eigen::VectorXd v(2 * M);
    for (Eigen::Index i = 0; i < M; ++i) {
      v(i) = a * f[i + 1];
      v(M + i) = b * f[i + 1];
    }
    return (Bt * v).norm() / v.norm();
  };
  rep.kernel_residuals.push_back(residual(alpha, 1.0, l1.kernel_candidate));
  rep.kernel_residuals.push_back(residual(-1.0, alpha, l2.kernel_candidate));

  Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("linearized_spectrum: dense eigensolver failed");
  std::vector<std::complex<double>> all(es.eigenvalues().data(), es.eigenvalues().data() + 2 * M);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  rep.all_eigenvalues = all;

  const double dx = g.dx;
  rep.near_kernel_band = 5.0 * dx * dx;
  for (const auto& z : all) {
    if (z.real() < -rep.near_kernel_band) ++rep.negative_real_part_count;
  }
  std::vector<double> dev;
  for (const auto& z : all) {
    if (z.real() > 2.0 * alpha * (1.0 + sol.h0)) dev.push_back(std::abs(std::abs(z.imag() / z.real()) - 1.0 / alpha));
  }
  rep.ray_sample_count = dev.size();
  if (!dev.empty()) {
    std::nth_element(dev.begin(), dev.begin() + dev.size() / 2, dev.end());
    rep.ray_deviation = dev[dev.size() / 2];
  }

  // Polish the k smallest real parts, keeping conjugate pairs together.
  std::size_t count = std::min<std::size_t>(k, all.size());
  if (count < all.size() && std::abs(all[count - 1].imag()) > 0.0 &&
      std::abs(all[count].real() - all[count - 1].real()) <= 1e-9 * (1.0 + std::abs(all[count].real()))) {
    ++count;
  }
  const Eigen::MatrixXcd Bc = B.cast<std::complex<double>>();
  const double bnorm = B.cwiseAbs().rowwise().sum().maxCoeff();
  for (std::size_t j = 0; j < count; ++j) {
    const std::complex<double> target = all[j];
    const std::complex<double> shift = target + std::complex<double>(1e-10 * bnorm, 1e-10 * bnorm);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Bc - shift * Eigen::MatrixXcd::Identity(2 * M, 2 * M));
    Eigen::VectorXcd v(2 * M);
    for (Eigen::Index i = 0; i < 2 * M; ++i) v(i) = {1.0 + 0.3 * std::sin(0.7 * i), 0.2 * std::cos(1.3 * i)};
    v.normalize();
    std::complex<double> lambda = target;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      v = lu.solve(v);
      v.normalize();
      const Eigen::VectorXcd bv = Bc * v;
      lambda = v.dot(bv);
      if ((bv - lambda * v).norm() <= 1e-9 * bnorm) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("linearized_spectrum: shifted inverse iteration did not converge in 200 iterations");
    }
    rep.complex_eigenvalues.push_back(lambda);
    std::vector<std::complex<double>> full(2 * g.n);
    for (Eigen::Index i = 0; i < M; ++i) {
      full[static_cast<std::size_t>(i) + 1] = v(i) / std::sqrt(dx);
      full[g.n + static_cast<std::size_t>(i) + 1] = v(M + i) / std::sqrt(dx);
    }
    rep.complex_eigenvectors.push_back(std::move(full));
  }
  return rep;
}

}  // namespace llgwire
