#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drm/errors.hpp"
#include "drm/moment_core.hpp"

namespace drm {

// Finite support for the discretised primal; sorted, duplicates merged.
class SupportGrid {
public:
    explicit SupportGrid(std::vector<double> points);

    static SupportGrid uniform(double lo, double hi, double step);
    // `count` uniform points on [min x - 3 sigma, max x + 3 sigma]; the sample
    // points, tau and tau +/- one spacing are added by primal_lp_bound.
    static SupportGrid for_problem(const ProblemSpec& problem, std::size_t count = 600);

    std::span<const double> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double lo() const { return points_.front(); }
    double hi() const { return points_.back(); }

    SupportGrid with(std::span<const double> extra) const;

private:
    std::vector<double> points_;
};

class LpInfeasible : public InfeasibleError {
public:
    LpInfeasible(const std::string& what, std::size_t grid_size, double grid_lo, double grid_hi)
        : InfeasibleError(what), grid_size(grid_size), grid_lo(grid_lo), grid_hi(grid_hi) {}
    std::size_t grid_size;
    double grid_lo;
    double grid_hi;
};

struct PrimalLpResult {
    double value = 0.0;
    std::vector<double> support;  // atoms of the maximising law with positive mass
    std::vector<double> mass;
    std::size_t grid_size = 0;
    std::size_t pivots = 0;
};

// Exact optimum of the primal restricted to couplings supported on
// sample x grid. A lower bound on the worst-case expectation.
PrimalLpResult primal_lp_bound(const ProblemSpec& problem, const SupportGrid& grid);

struct DualOracleSpec {
    std::size_t theta_count = 80;
    std::size_t phi_count = 80;
    std::size_t radial_count = 200;
    double r_min = 1e-4;
    double r_max = 1e4;
};

// Minimum of the dual objective over a spherical lattice of feasible points. An
// upper bound on the worst-case expectation.
double dual_grid_oracle(const ProblemSpec& problem, const DualOracleSpec& spec = {});

}  // namespace drm
