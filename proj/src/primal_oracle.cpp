#include "drm/primal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "drm/dual_objective.hpp"
#include "drm/simplex.hpp"
#include "drm/spherical_solver.hpp"

namespace drm {

SupportGrid::SupportGrid(std::vector<double> points) : points_(std::move(points)) {
    for (double p : points_) {
        if (!std::isfinite(p)) throw DomainError("support grid contains a non-finite point");
    }
    std::sort(points_.begin(), points_.end());
    std::vector<double> merged;
    for (double p : points_) {
        if (merged.empty() || p - merged.back() > 1e-12 * std::max(1.0, std::abs(p))) merged.push_back(p);
    }
    points_ = std::move(merged);
    if (points_.size() < 2) throw DomainError("support grid needs at least two distinct points");
}

SupportGrid SupportGrid::uniform(double lo, double hi, double step) {
    if (!(hi > lo) || !(step > 0.0)) throw DomainError("uniform grid needs lo < hi and a positive step");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> pts(count);
    for (std::size_t k = 0; k < count; ++k) pts[k] = lo + static_cast<double>(k) * step;
    if (hi - pts.back() > 1e-9 * step) pts.push_back(hi);
    return SupportGrid(std::move(pts));
}

SupportGrid SupportGrid::for_problem(const ProblemSpec& problem, std::size_t count) {
    if (count < 2) throw DomainError("support grid needs at least two points");
    const double pad = 3.0 * problem.moments.sigma();
    double lo = problem.sample.min() - pad;
    double hi = problem.sample.max() + pad;
    lo = std::min(lo, problem.tau);
    hi = std::max(hi, problem.tau);
    if (hi <= lo) hi = lo + 1.0;
    std::vector<double> pts(count);
    for (std::size_t k = 0; k < count; ++k) {
        pts[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    return SupportGrid(std::move(pts));
}

SupportGrid SupportGrid::with(std::span<const double> extra) const {
    std::vector<double> pts(points_);
    pts.insert(pts.end(), extra.begin(), extra.end());
    return SupportGrid(std::move(pts));
}

PrimalLpResult primal_lp_bound(const ProblemSpec& problem, const SupportGrid& grid) {
    const double pad = 3.0 * problem.moments.sigma();
    const double need_lo = problem.sample.min() - pad;
    const double need_hi = problem.sample.max() + pad;
    const double slack = 1e-9 * std::max({1.0, std::abs(need_lo), std::abs(need_hi)});
    if (grid.lo() > need_lo + slack || grid.hi() < need_hi - slack) {
        throw DomainError("support grid must span [min x - 3 sigma, max x + 3 sigma]");
    }

    // always include the atoms of the empirical law and the threshold with neighbours
    const auto gp = grid.points();
    const auto it = std::lower_bound(gp.begin(), gp.end(), problem.tau);
    double spacing = (grid.hi() - grid.lo()) / static_cast<double>(grid.size() - 1);
    if (it != gp.end() && it != gp.begin()) spacing = std::min(spacing, *it - *(it - 1));
    std::vector<double> extra(problem.sample.points().begin(), problem.sample.points().end());
    extra.push_back(problem.tau);
    extra.push_back(problem.tau - spacing);
    extra.push_back(problem.tau + spacing);
    const SupportGrid full = grid.with(extra);
    const auto ys = full.points();

    const std::size_t n = problem.sample.size();
    const std::size_t m = ys.size();
    const double mu = problem.moments.mu();
    const double sigma = problem.moments.sigma();
    const double s = std::max({sigma, full.hi() - full.lo(), 1e-300});
    const double nn = static_cast<double>(n);

    // variables w_ij = n * pi_ij; coordinates centred at mu and scaled by s
    LinearProgram lp;
    lp.objective.assign(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) lp.objective[i * m + j] = cost(problem.kind, problem.tau, ys[j]) / nn;
    }
    for (std::size_t i = 0; i < n; ++i) {
        LpRow r{std::vector<double>(n * m, 0.0), RowSense::Equal, 1.0};
        for (std::size_t j = 0; j < m; ++j) r.coeffs[i * m + j] = 1.0;
        lp.rows.push_back(std::move(r));
    }
    LpRow first{std::vector<double>(n * m, 0.0), RowSense::Equal, 0.0};
    LpRow second{std::vector<double>(n * m, 0.0), RowSense::Equal, nn * (sigma / s) * (sigma / s)};
    LpRow transport{std::vector<double>(n * m, 0.0), RowSense::LessEqual, nn * problem.delta / (s * s)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double z = (ys[j] - mu) / s;
            const double d = (ys[j] - problem.sample[i]) / s;
            first.coeffs[i * m + j] = z;
            second.coeffs[i * m + j] = z * z;
            transport.coeffs[i * m + j] = d * d;
        }
    }
    lp.rows.push_back(std::move(first));
    lp.rows.push_back(std::move(second));
    lp.rows.push_back(std::move(transport));

    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible) {
        throw LpInfeasible("restricted primal is infeasible on a grid of " + std::to_string(m) + " points spanning [" +
                               std::to_string(full.lo()) + ", " + std::to_string(full.hi()) + "]",
                           m, full.lo(), full.hi());
    }
    if (sol.status != LpStatus::Optimal) {
        throw SolverFailure(sol.status == LpStatus::Unbounded ? "simplex reported an unbounded ray"
                                                              : "simplex hit its pivot limit");
    }

    PrimalLpResult out;
    out.value = sol.value;
    out.grid_size = m;
    out.pivots = sol.pivots;
    for (std::size_t j = 0; j < m; ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) w += sol.x[i * m + j];
        if (w > 1e-12) {
            out.support.push_back(ys[j]);
            out.mass.push_back(w / nn);
        }
    }
    return out;
}

double dual_grid_oracle(const ProblemSpec& problem, const DualOracleSpec& spec) {
    if (spec.theta_count == 0 || spec.phi_count == 0 || spec.radial_count < 2 || !(spec.r_max > spec.r_min) ||
        !(spec.r_min > 0.0)) {
        throw DomainError("dual oracle lattice is empty");
    }
    double best = std::numeric_limits<double>::infinity();
    const double log_lo = std::log(spec.r_min);
    const double log_step = (std::log(spec.r_max) - log_lo) / static_cast<double>(spec.radial_count - 1);
    for (std::size_t i = 0; i < spec.theta_count; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) * std::numbers::pi / static_cast<double>(spec.theta_count);
        for (std::size_t j = 0; j < spec.phi_count; ++j) {
            const double phi =
                (static_cast<double>(j) + 0.5) * 2.0 * std::numbers::pi / static_cast<double>(spec.phi_count);
            if (std::cos(phi) < 0.0) continue;
            for (std::size_t k = 0; k < spec.radial_count; ++k) {
                const double r = std::exp(log_lo + log_step * static_cast<double>(k));
                const ExtendedReal v = dual_value(problem.kind, spherical_to_dual(r, theta, phi), problem);
                if (v.is_finite()) best = std::min(best, v.value());
            }
        }
    }
    if (!std::isfinite(best)) throw InfeasibleError("no feasible lattice point for the dual oracle");
    return best;
}

}  // namespace drm
