#pragma once

#include <array>
#include <cstddef>
#include <limits>

#include "drm/moment_core.hpp"

namespace drm {

// Real number or +infinity (the dual objective outside its effective domain).
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr explicit ExtendedReal(double v) : value_(v) {}
    static constexpr ExtendedReal infinity() {
        ExtendedReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_finite() const { return !infinite_; }
    double value() const;  // throws DomainError when infinite
    constexpr double value_or_inf() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

struct DualPoint {
    double lambda1 = 0.0;  // multiplier of the transport budget, >= 0
    double lambda2 = 0.0;  // first moment
    double lambda3 = 0.0;  // second moment
    double xi() const { return lambda1 + lambda3; }
};

double xi_threshold(CostKind kind);
bool xi_feasible(CostKind kind, double xi);

ExtendedReal psi_i(CostKind kind, const DualPoint& p, double x_i, double tau);

// lambda1*delta + lambda2*mu + lambda3*(sigma^2+mu^2) + mean_i psi_i
ExtendedReal dual_value(CostKind kind, const DualPoint& p, const ProblemSpec& problem);

struct Interval {
    double lo;
    double hi;
};

// One-sided partial derivatives along each coordinate axis.
std::array<Interval, 3> subgradient_box(CostKind kind, const DualPoint& p, const ProblemSpec& problem);

// Affine change of units y = centre + scale * y'. The dual is covariant under it,
// so the solvers work on the standardised problem (mean 0, sd 1) and map back.
struct Standardization {
    double centre = 0.0;
    double scale = 1.0;
    int order = 0;  // moment order of the cost; values scale by scale^order

    double value_scale() const;
    DualPoint to_original(const DualPoint& p) const;
};

// centre mu, scale sigma (the sample spread, or 1, when sigma is 0)
Standardization standardization_for(const ProblemSpec& problem);
ProblemSpec standardize(const ProblemSpec& problem, const Standardization& st);

// c2 b^2 + c1 b + c0
struct Quadratic {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double operator()(double b) const { return (c2 * b + c1) * b + c0; }
    double slope(double b) const { return 2.0 * c2 * b + c1; }
};

// b -> sup_y { psi_tau(y) + g0(y; a, b) } at fixed a, as a continuous convex
// piecewise quadratic with at most two knots.
class BranchProfile {
public:
    BranchProfile(CostKind kind, double a, double tau);

    std::size_t knot_count() const { return knot_count_; }
    double knot(std::size_t j) const { return knots_[j]; }
    const Quadratic& branch(std::size_t j) const { return branches_[j]; }

    // Branch whose interval contains b; knots belong to the left branch.
    std::size_t locate(double b) const;
    double operator()(double b) const { return value(locate(b), b); }
    // Branch j at b. The second-moment branch is evaluated as (b - tau)^2 / (a - 1) + tau^2,
    // which stays accurate as a approaches 1 where the expanded coefficients cancel.
    double value(std::size_t j, double b) const;

    // Gradient of branch j with respect to (a, b).
    std::array<double, 2> branch_gradient(std::size_t j, double b) const;

    CostKind kind() const { return kind_; }
    double a() const { return a_; }
    double tau() const { return tau_; }

private:
    CostKind kind_;
    double a_;
    double tau_;
    std::size_t knot_count_ = 0;
    std::array<double, 2> knots_{};
    std::array<Quadratic, 3> branches_{};
    std::array<int, 3> shapes_{};
};

}  // namespace drm
