#pragma once

#include <cstddef>

#include "drm/bound_result.hpp"
#include "drm/moment_core.hpp"

namespace drm {

struct GridSpec {
    std::size_t theta_count = 750;
    std::size_t phi_count = 750;
    double epsilon = 1e-6;  // radial floor when the objective rises from r = 0
    std::size_t jobs = 0;   // 0: hardware concurrency
};

// (r, theta, phi) -> (lambda1, lambda2, lambda3)
DualPoint spherical_to_dual(double r, double theta, double phi);

struct RadialMinimum {
    bool feasible = false;   // direction lies in the dual domain
    bool unbounded = false;  // objective decreases without bound along the ray
    double r = 0.0;
    double value = 0.0;
};

// Minimum of the dual objective along the ray (theta, phi), in the problem's own units.
RadialMinimum radial_minimum(const ProblemSpec& problem, double theta, double phi, double epsilon = 1e-6);

// Cell and radius of the best ray, on the standardised problem (see standardize).
struct SmDiagnostics {
    std::size_t feasible_cells = 0;
    std::size_t skipped_cells = 0;  // degenerate rays whose infimum sits at r = infinity
    std::size_t best_theta = 0;
    std::size_t best_phi = 0;
    double best_r = 0.0;
};

BoundResult solve_sm(const ProblemSpec& problem, const GridSpec& grid = {}, SmDiagnostics* diagnostics = nullptr);

}  // namespace drm
