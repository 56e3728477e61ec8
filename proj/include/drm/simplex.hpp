#pragma once

#include <cstddef>
#include <vector>

namespace drm {

enum class RowSense { Equal, LessEqual };

struct LpRow {
    std::vector<double> coeffs;  // dense, one entry per variable
    RowSense sense = RowSense::Equal;
    double rhs = 0.0;
};

// maximize objective . x  subject to rows, x >= 0
struct LinearProgram {
    std::vector<double> objective;
    std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

struct SimplexOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-10;
    double pivot_tol = 1e-9;  // relative to the largest entry of the entering column
    std::size_t max_pivots = 1000000;
};

// Dense two-phase simplex with Bland's rule (lowest-index entering and leaving
// variables), so degenerate problems cannot cycle.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace drm
