#pragma once

#include <cstddef>
#include <span>

#include "llgwire/vec3.hpp"

namespace llgwire::kernels {

struct StepParams {
  double dx = 0.0;
  double h0 = 0.0;
  double alpha = 1.0;
  double dt = 0.0;
  bool renormalize = true;
};

/// Node count below which the OpenMP region runs on one thread.
inline constexpr std::size_t kParallelThreshold = 4096;

/// One explicit Euler step of LLG with the discrete effective field, fused
/// per node: out_i = (m_i + dt rhs_i) / |m_i + dt rhs_i|. Returns the
/// smallest pre-normalization length. `in` and `out` must not alias.
double llg_step(std::span<const Vec3> in, std::span<Vec3> out, const StepParams& p,
                std::size_t parallel_threshold = kParallelThreshold);

/// H1 distance squared between a sampled field and a candidate built from
/// `profile` samples: candidate_i = R_phi profile[i + offset]. Central
/// differences inside, one-sided at the ends, trapezoid weights.
double h1_distance_sq_shifted(std::span<const Vec3> m, std::span<const Vec3> profile, std::ptrdiff_t offset,
                              double phi, double dx);

}  // namespace llgwire::kernels
