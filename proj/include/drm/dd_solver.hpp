#pragma once

#include <cstddef>
#include <vector>

#include "drm/bound_result.hpp"
#include "drm/moment_core.hpp"

namespace drm {

// Lines in the (lambda1, lambda2) plane along which some b_i = lambda1 x_i - lambda2/2
// sits on a knot of the branch profile. U lines carry the knot xi*tau (or
// xi*tau -/+ 1/4 for first moments); L lines the second ZPM knot.
enum class LineFamily { U, L };

struct BreakLine {
    LineFamily family;
    std::size_t index;  // 1-based position of x_i in the sorted sample
    double slope;       // lambda2 = slope * lambda1 + intercept
    double intercept;
};

std::vector<BreakLine> build_breaklines(CostKind kind, double xi, const EmpiricalSample& sample, double tau);

struct PlaneOptions {
    std::size_t max_traversals = 0;  // 0: 10 (n^2 + 2n)
};

struct PlaneResult {
    double value = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::size_t traversals = 0;
    std::size_t vertices = 0;
};

// Minimises the dual objective over (lambda1 >= 0, lambda2) with xi held fixed.
PlaneResult dd_minimize_plane(const ProblemSpec& problem, double xi, const PlaneOptions& options = {});

struct DdOptions {
    double xi_offset = 1e-8;     // first trial point above the curvature floor
    double initial_step = 1e-6;  // bracket expansion starts here and doubles
    double xi_rel_tol = 1e-8;
    double xi_ceiling = 1e12;
    PlaneOptions plane;
};

// Solves the standardised problem and maps the result back. The xi options and a
// SolverFailure's best point therefore refer to standardised units.
BoundResult solve_dd(const ProblemSpec& problem, const DdOptions& options = {});

}  // namespace drm
