#include "drm/dual_objective.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "drm/closed_form.hpp"
#include "drm/errors.hpp"

namespace drm {

double ExtendedReal::value() const {
    if (infinite_) throw DomainError("dual objective is +infinity at this point");
    return value_;
}

double xi_threshold(CostKind kind) { return curvature_floor(kind); }

bool xi_feasible(CostKind kind, double xi) { return std::isfinite(xi) && xi > xi_threshold(kind); }

ExtendedReal psi_i(CostKind kind, const DualPoint& p, double x_i, double tau) {
    const double xi = p.xi();
    if (!xi_feasible(kind, xi)) return ExtendedReal::infinity();
    const double b = p.lambda1 * x_i - 0.5 * p.lambda2;
    return ExtendedReal(-p.lambda1 * x_i * x_i + sup_g_compact(kind, xi, b, tau));
}

ExtendedReal dual_value(CostKind kind, const DualPoint& p, const ProblemSpec& problem) {
    if (kind != problem.kind) throw UsageError("dual_value: cost kind does not match the problem");
    if (p.lambda1 < 0.0 || !xi_feasible(kind, p.xi())) return ExtendedReal::infinity();
    const auto xs = problem.sample.points();
    std::vector<double> terms(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) terms[i] = psi_i(kind, p, xs[i], problem.tau).value();
    const double mean_psi = pairwise_sum(terms) / static_cast<double>(xs.size());
    return ExtendedReal(p.lambda1 * problem.delta + p.lambda2 * problem.moments.mu() +
                        p.lambda3 * problem.moments.second_moment() + mean_psi);
}

double Standardization::value_scale() const { return std::pow(scale, order); }

DualPoint Standardization::to_original(const DualPoint& p) const {
    const double f = std::pow(scale, order - 2);
    return {f * p.lambda1, std::pow(scale, order - 1) * p.lambda2 - 2.0 * centre * f * p.lambda3, f * p.lambda3};
}

Standardization standardization_for(const ProblemSpec& problem) {
    double s = problem.moments.sigma();
    if (!(s > 0.0)) s = problem.sample.stddev();
    if (!(s > 0.0)) s = 1.0;
    return {problem.moments.mu(), s, moment_order(problem.kind)};
}

ProblemSpec standardize(const ProblemSpec& problem, const Standardization& st) {
    std::vector<double> xs(problem.sample.points().begin(), problem.sample.points().end());
    for (double& x : xs) x = (x - st.centre) / st.scale;
    return ProblemSpec(problem.kind, (problem.tau - st.centre) / st.scale,
                       MomentSpec((problem.moments.mu() - st.centre) / st.scale, problem.moments.sigma() / st.scale),
                       EmpiricalSample(std::move(xs)), problem.delta / (st.scale * st.scale));
}

namespace {

enum Shape { kPlain = 0, kLinear = 1, kLowerFirst = 2, kUpperFirst = 3, kSecond = 4 };

double knot_tolerance(double b, double knot) { return 1e-11 * std::max({std::abs(b), std::abs(knot), 1e-300}); }

}  // namespace

BranchProfile::BranchProfile(CostKind kind, double a, double tau) : kind_(kind), a_(a), tau_(tau) {
    if (!xi_feasible(kind, a)) throw CurvatureError(kind, a);
    const Quadratic plain{1.0 / a, 0.0, 0.0};
    const Quadratic plain_one{1.0 / a, 0.0, 1.0};
    const Quadratic linear{0.0, 2.0 * tau, 1.0 - a * tau * tau};
    const double ra = std::sqrt(a);
    switch (kind) {
        case CostKind::LZPM:
            knot_count_ = 2;
            knots_ = {a * tau, a * tau + ra};
            branches_ = {plain_one, linear, plain};
            shapes_ = {kPlain, kLinear, kPlain};
            break;
        case CostKind::UZPM:
            knot_count_ = 2;
            knots_ = {a * tau - ra, a * tau};
            branches_ = {plain, linear, plain_one};
            shapes_ = {kPlain, kLinear, kPlain};
            break;
        case CostKind::LFPM:
            knot_count_ = 1;
            knots_ = {a * tau + 0.25, 0.0};
            branches_ = {Quadratic{1.0 / a, -1.0 / a, tau + 0.25 / a}, plain, {}};
            shapes_ = {kLowerFirst, kPlain, kPlain};
            break;
        case CostKind::UFPM:
            knot_count_ = 1;
            knots_ = {a * tau - 0.25, 0.0};
            branches_ = {plain, Quadratic{1.0 / a, 1.0 / a, 0.25 / a - tau}, {}};
            shapes_ = {kPlain, kUpperFirst, kPlain};
            break;
        case CostKind::LSPM:
        case CostKind::USPM: {
            const double w = 1.0 / (a - 1.0);
            const Quadratic second{w, -2.0 * tau * w, a * tau * tau * w};
            knot_count_ = 1;
            knots_ = {a * tau, 0.0};
            if (kind == CostKind::LSPM) {
                branches_ = {second, plain, {}};
                shapes_ = {kSecond, kPlain, kPlain};
            } else {
                branches_ = {plain, second, {}};
                shapes_ = {kPlain, kSecond, kPlain};
            }
            break;
        }
    }
}

std::size_t BranchProfile::locate(double b) const {
    std::size_t j = 0;
    while (j < knot_count_ && b > knots_[j]) ++j;
    return j;
}

double BranchProfile::value(std::size_t j, double b) const {
    if (shapes_[j] == kSecond) {
        const double d = b - tau_;
        return d * d / (a_ - 1.0) + tau_ * tau_;
    }
    return branches_[j](b);
}

std::array<double, 2> BranchProfile::branch_gradient(std::size_t j, double b) const {
    const double a = a_;
    switch (shapes_[j]) {
        case kPlain: return {-(b * b) / (a * a), 2.0 * b / a};
        case kLinear: return {-tau_ * tau_, 2.0 * tau_};
        case kLowerFirst: return {-(b - 0.5) * (b - 0.5) / (a * a), 2.0 * (b - 0.5) / a};
        case kUpperFirst: return {-(b + 0.5) * (b + 0.5) / (a * a), 2.0 * (b + 0.5) / a};
        default: {
            const double d = (b - tau_) / (a - 1.0);
            return {-d * d, 2.0 * d};
        }
    }
}

std::array<Interval, 3> subgradient_box(CostKind kind, const DualPoint& p, const ProblemSpec& problem) {
    if (kind != problem.kind) throw UsageError("subgradient_box: cost kind does not match the problem");
    if (!xi_feasible(kind, p.xi())) throw CurvatureError(kind, p.xi());
    const BranchProfile profile(kind, p.xi(), problem.tau);
    const auto xs = problem.sample.points();
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    std::array<Interval, 3> box{Interval{problem.delta, problem.delta},
                                Interval{problem.moments.mu(), problem.moments.mu()},
                                Interval{problem.moments.second_moment(), problem.moments.second_moment()}};
    for (double x : xs) {
        const double b = p.lambda1 * x - 0.5 * p.lambda2;
        std::array<std::size_t, 3> adjacent{};
        std::size_t count = 0;
        const std::size_t home = profile.locate(b);
        adjacent[count++] = home;
        for (std::size_t j = 0; j < profile.knot_count(); ++j) {
            if (std::abs(b - profile.knot(j)) <= knot_tolerance(b, profile.knot(j))) {
                for (std::size_t side : {j, j + 1}) {
                    if (std::find(adjacent.begin(), adjacent.begin() + count, side) == adjacent.begin() + count) {
                        adjacent[count++] = side;
                    }
                }
            }
        }
        std::array<double, 3> lo{}, hi{};
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < count; ++k) {
            const auto [ga, gb] = profile.branch_gradient(adjacent[k], b);
            const std::array<double, 3> d{-x * x + ga + gb * x, -0.5 * gb, ga};
            for (int c = 0; c < 3; ++c) {
                lo[c] = std::min(lo[c], d[c]);
                hi[c] = std::max(hi[c], d[c]);
            }
        }
        for (int c = 0; c < 3; ++c) {
            box[c].lo += inv_n * lo[c];
            box[c].hi += inv_n * hi[c];
        }
    }
    return box;
}

}  // namespace drm
