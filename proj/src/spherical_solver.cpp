#include "drm/spherical_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "drm/errors.hpp"
#include "drm/parallel.hpp"

namespace drm {

DualPoint spherical_to_dual(double r, double theta, double phi) {
    const double l1 = r * std::sin(theta) * std::cos(phi);
    if (l1 < 0.0) throw DomainError("spherical_to_dual: direction gives lambda1 < 0");
    return {r * std::sin(theta) * std::cos(phi), r * std::cos(theta), r * std::sin(theta) * std::sin(phi)};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RayStatus { Outside, Ok, Unbounded, Skip };

struct RayMin {
    RayStatus status = RayStatus::Outside;
    double r = 0.0;
    double value = kInf;
};

// Root of a nondecreasing derivative on (floor, inf) that tends to -inf at floor.
template <class Deriv>
double bisect_root(Deriv&& deriv, double floor) {
    double step = std::max(floor, 1.0);
    double hi = floor + step;
    for (int k = 0; k < 2000 && deriv(hi) < 0.0; ++k) {
        step *= 2.0;
        hi = floor + step;
    }
    double lo = floor;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (deriv(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct RaySolver {
    const ProblemSpec& problem;
    double epsilon;
    double mean_sq;
    std::vector<double> m;     // b~_k / a~
    std::vector<double> q;     // b~_k^2 / a~
    std::vector<double> cuts;  // breakpoints
    std::vector<std::pair<double, double>> pairs;

    RayMin solve(double theta, double phi) {
        const double st = std::sin(theta), ct = std::cos(theta);
        const double sp = std::sin(phi), cp = std::cos(phi);
        const double at = st * (cp + sp);
        const double a0 = st * cp;
        if (!(cp >= 0.0) || !(at > 0.0)) return {};
        const auto xs = problem.sample.points();
        const std::size_t n = xs.size();
        const double inv_n = 1.0 / static_cast<double>(n);
        const double tau = problem.tau;
        m.resize(n);
        q.resize(n);
        double mean_q = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double bt = a0 * xs[k] - 0.5 * ct;
            m[k] = bt / at;
            q[k] = bt * bt / at;
            mean_q += q[k];
        }
        mean_q *= inv_n;
        const double a_lin = a0 * problem.delta + ct * problem.moments.mu() + st * sp * problem.moments.second_moment() -
                             a0 * mean_sq;
        const double scale = std::abs(a0 * problem.delta) + std::abs(ct * problem.moments.mu()) +
                             std::abs(st * sp * problem.moments.second_moment()) + std::abs(a0 * mean_sq) + mean_q;
        const double tol = 1e-12 * scale;
        const CostKind kind = problem.kind;

        switch (moment_order(kind)) {
            case 0: {
                // F(r) = r a_lin + mean_k max(1 + r p_k, c_k + r q_k), piecewise linear
                const bool lower = kind == CostKind::LZPM;
                double slope = a_lin;
                pairs.clear();
                for (std::size_t k = 0; k < n; ++k) {
                    const double p = (-at * tau + 2.0 * m[k] * at) * tau;
                    const bool c = lower ? m[k] <= tau : m[k] >= tau;
                    if (c) {
                        slope += inv_n * q[k];
                    } else {
                        slope += inv_n * p;
                        pairs.emplace_back(1.0 / (q[k] - p), inv_n * (q[k] - p));
                    }
                }
                std::sort(pairs.begin(), pairs.end());
                std::size_t idx = 0;
                while (idx < pairs.size() && pairs[idx].first <= epsilon) slope += pairs[idx++].second;
                double r = epsilon;
                if (slope < 0.0) {
                    bool found = false;
                    while (idx < pairs.size()) {
                        slope += pairs[idx].second;
                        r = pairs[idx].first;
                        ++idx;
                        if (slope >= 0.0) {
                            found = true;
                            break;
                        }
                    }
                    if (!found) return {slope < -tol ? RayStatus::Unbounded : RayStatus::Skip};
                }
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double p = (-at * tau + 2.0 * m[k] * at) * tau;
                    const bool c = lower ? m[k] <= tau : m[k] >= tau;
                    v += std::max(1.0 + r * p, (c ? 1.0 : 0.0) + r * q[k]);
                }
                return {RayStatus::Ok, r, r * a_lin + inv_n * v};
            }
            case 1: {
                // F(r) = r A + mean_k (d_k + 1/(4 r a~))_+
                const double a_full = a_lin + mean_q;
                const bool lower = kind == CostKind::LFPM;
                cuts.clear();
                std::size_t always = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double d = lower ? tau - m[k] : m[k] - tau;
                    if (d >= 0.0) ++always;
                    else cuts.push_back(-1.0 / (4.0 * at * d));
                }
                if (a_full < -tol) return {RayStatus::Unbounded};
                if (a_full <= tol) return {RayStatus::Skip};
                std::sort(cuts.begin(), cuts.end());
                auto deriv = [&](double r) {
                    const auto above = static_cast<std::size_t>(cuts.end() - std::upper_bound(cuts.begin(), cuts.end(), r));
                    return a_full - static_cast<double>(always + above) * inv_n / (4.0 * r * r * at);
                };
                const double r = bisect_root(deriv, 0.0);
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double d = lower ? tau - m[k] : m[k] - tau;
                    v += std::max(d + 1.0 / (4.0 * r * at), 0.0);
                }
                return {RayStatus::Ok, r, r * a_full + inv_n * v};
            }
            default: {
                // F(r) = r A + B r a~ / (r a~ - 1) on r > 1/a~
                const double a_full = a_lin + mean_q;
                const bool lower = kind == CostKind::LSPM;
                double b_sum = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double d = std::max(lower ? tau - m[k] : m[k] - tau, 0.0);
                    b_sum += d * d;
                }
                const double b = inv_n * b_sum;
                const double floor = 1.0 / at;
                if (a_full < -tol) return {RayStatus::Unbounded};
                if (a_full <= tol) return {RayStatus::Skip};
                double r;
                if (b == 0.0) {
                    r = floor + epsilon;
                } else {
                    auto deriv = [&](double rr) {
                        const double u = rr * at - 1.0;
                        return a_full - b * at / (u * u);
                    };
                    r = bisect_root(deriv, floor);
                }
                return {RayStatus::Ok, r, r * a_full + b * r * at / (r * at - 1.0)};
            }
        }
        return {};
    }
};

}  // namespace

RadialMinimum radial_minimum(const ProblemSpec& problem, double theta, double phi, double epsilon) {
    RaySolver solver{problem, epsilon, problem.sample.mean_of_squares(), {}, {}, {}, {}};
    const RayMin ray = solver.solve(theta, phi);
    RadialMinimum out;
    out.feasible = ray.status != RayStatus::Outside;
    out.unbounded = ray.status == RayStatus::Unbounded;
    if (ray.status == RayStatus::Ok) {
        out.r = ray.r;
        out.value = ray.value;
    } else if (ray.status == RayStatus::Skip) {
        out.r = std::numeric_limits<double>::infinity();
        out.value = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

namespace {

BoundResult solve_sm_standard(const ProblemSpec& problem, const GridSpec& grid, SmDiagnostics* diagnostics) {
    if (grid.theta_count == 0 || grid.phi_count == 0) throw DomainError("angular grid must be nonempty");
    const std::size_t rows = grid.theta_count;
    const std::size_t cols = grid.phi_count;
    const double mean_sq = problem.sample.mean_of_squares();

    struct RowBest {
        double value = kInf;
        double r = 0.0;
        std::size_t col = 0;
        std::size_t feasible = 0;
        std::size_t skipped = 0;
        bool unbounded = false;
    };
    std::vector<RowBest> best(rows);
    const std::size_t jobs = grid.jobs ? grid.jobs : default_jobs();

    parallel_for(rows, jobs, [&](std::size_t i) {
        RaySolver solver{problem, grid.epsilon, mean_sq, {}, {}, {}, {}};
        const double theta = (static_cast<double>(i) + 0.5) * std::numbers::pi / static_cast<double>(rows);
        RowBest& rb = best[i];
        for (std::size_t j = 0; j < cols; ++j) {
            const double phi = (static_cast<double>(j) + 0.5) * 2.0 * std::numbers::pi / static_cast<double>(cols);
            const RayMin ray = solver.solve(theta, phi);
            if (ray.status == RayStatus::Outside) continue;
            if (ray.status == RayStatus::Skip) {
                ++rb.skipped;
                continue;
            }
            if (ray.status == RayStatus::Unbounded) {
                rb.unbounded = true;
                continue;
            }
            ++rb.feasible;
            if (ray.value < rb.value) {
                rb.value = ray.value;
                rb.r = ray.r;
                rb.col = j;
            }
        }
    });

    RowBest overall;
    std::size_t overall_row = 0;
    std::size_t feasible = 0;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (best[i].unbounded) throw InfeasibleError("dual objective is unbounded below along a feasible ray");
        feasible += best[i].feasible;
        skipped += best[i].skipped;
        if (best[i].value < overall.value) {
            overall = best[i];
            overall_row = i;
        }
    }
    if (feasible == 0 || !std::isfinite(overall.value)) throw InfeasibleError("no feasible cell in the angular grid");

    const double theta = (static_cast<double>(overall_row) + 0.5) * std::numbers::pi / static_cast<double>(rows);
    const double phi = (static_cast<double>(overall.col) + 0.5) * 2.0 * std::numbers::pi / static_cast<double>(cols);
    BoundResult out;
    out.argmin = spherical_to_dual(overall.r, theta, phi);
    out.value = dual_value(problem.kind, out.argmin, problem).value();
    out.method = Method::SM;
    out.iterations = feasible;
    out.xi_star = out.argmin.xi();
    if (diagnostics) {
        *diagnostics = {feasible, skipped, overall_row, overall.col, overall.r};
    }
    return out;
}

}  // namespace

BoundResult solve_sm(const ProblemSpec& problem, const GridSpec& grid, SmDiagnostics* diagnostics) {
    const Standardization st = standardization_for(problem);
    BoundResult r = solve_sm_standard(standardize(problem, st), grid, diagnostics);
    r.value *= st.value_scale();
    r.argmin = st.to_original(r.argmin);
    r.xi_star = r.argmin.xi();
    return r;
}

}  // namespace drm
