#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "drm/dd_solver.hpp"
#include "drm/dual_objective.hpp"
#include "drm/errors.hpp"
#include "drm/spherical_solver.hpp"
#include "iphone.hpp"

using namespace drm;

namespace {

constexpr double kPi = std::numbers::pi;

ProblemSpec two_point(CostKind kind, double tau, double delta) {
    return ProblemSpec(kind, tau, MomentSpec(11, 1), test::two_point_sample(), delta);
}

// golden section on a log scale over [lo, hi]
double scan_ray(const ProblemSpec& p, double theta, double phi, double lo, double hi) {
    auto f = [&](double t) {
        const ExtendedReal v = dual_value(p.kind, spherical_to_dual(std::exp(t), theta, phi), p);
        return v.value_or_inf();
    };
    double best = std::numeric_limits<double>::infinity();
    double best_t = std::log(lo);
    const int steps = 20000;
    for (int k = 0; k <= steps; ++k) {
        const double t = std::log(lo) + (std::log(hi) - std::log(lo)) * k / steps;
        const double v = f(t);
        if (v < best) best = v, best_t = t;
    }
    double a = best_t - (std::log(hi) - std::log(lo)) / steps, b = best_t + (std::log(hi) - std::log(lo)) / steps;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int k = 0; k < 200; ++k) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) < f(d)) b = d; else a = c;
    }
    return std::min(best, f((a + b) / 2));
}

}  // namespace

TEST(spherical_to_dual, mapping) {
    DualPoint p = spherical_to_dual(2.0, kPi / 2, 0.0);
    EXPECT_NEAR(p.lambda1, 2.0, 1e-15);
    EXPECT_NEAR(p.lambda2, 0.0, 1e-15);
    EXPECT_NEAR(p.lambda3, 0.0, 1e-15);
    p = spherical_to_dual(3.0, 0.0, 0.0);
    EXPECT_NEAR(p.lambda2, 3.0, 1e-15);
    p = spherical_to_dual(1.0, kPi / 2, kPi / 4);
    EXPECT_NEAR(p.lambda1, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(p.lambda3, std::sqrt(0.5), 1e-15);
    EXPECT_THROW(spherical_to_dual(1.0, kPi / 2, kPi), DomainError);
}

TEST(radial_minimum, outside_domain_is_infeasible) {
    const ProblemSpec p = two_point(CostKind::LZPM, 11, 0.5);
    // sin(theta)(cos phi + sin phi) < 0
    EXPECT_FALSE(radial_minimum(p, kPi / 2, 1.2 * kPi).feasible);
}

TEST(radial_minimum, no_probe_along_ray_is_lower) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(0.05, kPi - 0.05), ph(-kPi / 4 + 0.05, kPi / 2 - 0.05);
    std::uniform_real_distribution<double> lr(-4, 4);
    for (CostKind kind : all_cost_kinds) {
        const ProblemSpec p(kind, 11.0, MomentSpec(11, 1), test::two_point_sample(), 0.7);
        for (int k = 0; k < 30; ++k) {
            const double theta = th(rng), phi = ph(rng);
            const RadialMinimum m = radial_minimum(p, theta, phi);
            if (!m.feasible || m.unbounded) continue;
            EXPECT_NEAR(dual_value(kind, spherical_to_dual(m.r, theta, phi), p).value(), m.value, 1e-9);
            for (int j = 0; j < 10; ++j) {
                const double r = std::exp(lr(rng));
                const ExtendedReal v = dual_value(kind, spherical_to_dual(r, theta, phi), p);
                if (v.is_finite()) EXPECT_GE(v.value(), m.value - 1e-9 * (1 + std::abs(m.value))) << to_string(kind);
            }
        }
    }
}

TEST(radial_minimum, agrees_with_one_dimensional_scan) {
    const ProblemSpec raw = two_point(CostKind::UZPM, 11.5, 0.5);
    const ProblemSpec p = standardize(raw, standardization_for(raw));
    SmDiagnostics d;
    GridSpec g;
    g.theta_count = 120;
    g.phi_count = 120;
    solve_sm(raw, g, &d);
    const double theta = (d.best_theta + 0.5) * kPi / g.theta_count;
    const double phi = (d.best_phi + 0.5) * 2 * kPi / g.phi_count;
    const RadialMinimum m = radial_minimum(p, theta, phi);
    ASSERT_TRUE(m.feasible);
    EXPECT_NEAR(m.value, scan_ray(p, theta, phi, 1e-6, 1e6), 1e-6);
}

TEST(solve_sm, lower_chebyshev_at_unit_radius) {
    EXPECT_NEAR(solve_sm(two_point(CostKind::LZPM, 11, 1.0)).value, 0.9286, 1e-3);
}

TEST(solve_sm, iphone_stockout_probability) {
    const ProblemSpec p(CostKind::UZPM, 221.77, MomentSpec(122.345, 85.326), test::iphone_sample(), 290.0);
    EXPECT_NEAR(solve_sm(p).value, 0.38, 0.01);
}

TEST(solve_sm, best_cell_reproduces_value) {
    const ProblemSpec p = two_point(CostKind::LFPM, 11.2, 0.4);
    const Standardization st = standardization_for(p);
    const ProblemSpec q = standardize(p, st);
    GridSpec g;
    g.theta_count = 200;
    g.phi_count = 200;
    SmDiagnostics d;
    const BoundResult r = solve_sm(p, g, &d);
    const double theta = (d.best_theta + 0.5) * kPi / g.theta_count;
    const double phi = (d.best_phi + 0.5) * 2 * kPi / g.phi_count;
    const double cell = dual_value(q.kind, spherical_to_dual(d.best_r, theta, phi), q).value();
    EXPECT_NEAR(st.value_scale() * cell, r.value, 1e-12);
    EXPECT_NEAR(dual_value(p.kind, r.argmin, p).value(), r.value, 1e-9);
    EXPECT_GE(r.value, solve_dd(p).value - 1e-9);
}

TEST(solve_sm, units_do_not_matter) {
    // same problem in cents: bound scales by 100^k
    const ProblemSpec p(CostKind::UFPM, 221.77, MomentSpec(122.345, 85.326), test::iphone_sample(), 290.0);
    std::vector<double> cents;
    for (double x : p.sample.points()) cents.push_back(100 * x);
    const ProblemSpec q(CostKind::UFPM, 22177, MomentSpec(12234.5, 8532.6), EmpiricalSample(cents), 290.0 * 1e4);
    GridSpec g;
    g.theta_count = g.phi_count = 150;
    EXPECT_NEAR(solve_sm(q, g).value, 100 * solve_sm(p, g).value, 1e-9 * solve_sm(q, g).value);
}

TEST(solve_sm, deterministic_across_thread_counts) {
    const ProblemSpec p = two_point(CostKind::USPM, 11.2, 0.4);
    GridSpec g;
    g.theta_count = 90;
    g.phi_count = 90;
    g.jobs = 1;
    const double one = solve_sm(p, g).value;
    g.jobs = 4;
    EXPECT_EQ(solve_sm(p, g).value, one);
}

TEST(solve_sm, refinement_does_not_hurt_on_nested_grids) {
    const ProblemSpec p = two_point(CostKind::UZPM, 11.5, 0.3);
    GridSpec coarse, fine;
    coarse.theta_count = coarse.phi_count = 100;
    fine.theta_count = fine.phi_count = 300;
    const double dd = solve_dd(p).value;
    const double c = solve_sm(p, coarse).value, f = solve_sm(p, fine).value;
    EXPECT_GE(c, dd - 1e-9);
    EXPECT_GE(f, dd - 1e-9);
    EXPECT_LE(f - dd, c - dd + 1e-6);
}

TEST(solve_sm, inconsistent_moments_at_zero_radius) {
    const ProblemSpec p(CostKind::LZPM, 0.0, MomentSpec(0, 1), test::two_point_sample(), 0.0);
    GridSpec g;
    g.theta_count = g.phi_count = 60;
    EXPECT_THROW(solve_sm(p, g), InfeasibleError);
}
