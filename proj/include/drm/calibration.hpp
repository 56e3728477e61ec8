#pragma once

#include <cstddef>

#include "drm/moment_core.hpp"

namespace drm {

// Tail probability that the squared W2 distance between the empirical measure of
// n draws and the truth exceeds delta, for a law supported in a ball of radius r.
double delta_to_alpha(std::size_t n, double r, double delta);

// Smallest delta whose tail probability is at most 1 - beta.
double confidence_to_delta(std::size_t n, double r, double beta);

// Default support radius: max_i |x_i - mean|.
double support_radius(const EmpiricalSample& sample);

// W2 between two equal-size empirical measures (sorted coupling).
double w2_empirical(const EmpiricalSample& a, const EmpiricalSample& b);

}  // namespace drm
