#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "drm/closed_form.hpp"

using namespace drm;

namespace {

// sup over a dense grid refined around the best grid node
double brute_sup(CostKind kind, double a, double b, double tau) {
    auto f = [&](double x) { return cost(kind, tau, x) + g0(x, a, b); };
    const double centre = b / a;
    const double spread = a - curvature_floor(kind);
    const double half = std::abs(centre) + std::abs(tau) + (std::abs(b) + std::abs(tau)) / spread + 4.0 / std::min(spread, 1.0) + 4.0;
    double best = -1e300, arg = 0.0;
    const int n = 200000;
    for (int k = 0; k <= n; ++k) {
        const double x = centre - half + 2.0 * half * k / n;
        const double v = f(x);
        if (v > best) {
            best = v;
            arg = x;
        }
    }
    // the indicator kinds can peak exactly at tau
    for (double x : {tau, centre}) best = std::max(best, f(x));
    double h = 2.0 * half / n;
    for (int it = 0; it < 60; ++it) {
        for (double x : {arg - h, arg + h}) {
            if (f(x) > best) {
                best = f(x);
                arg = x;
            }
        }
        h *= 0.5;
    }
    return best;
}

}  // namespace

TEST(closed_form, g0_examples) {
    EXPECT_EQ(g0(0.0, 3.0, 5.0), 0.0);
    EXPECT_DOUBLE_EQ(g0(2.5 / 2.0, 2.0, 2.5), 2.5 * 2.5 / 2.0);
    EXPECT_EQ(g0(1.0, 1.0, 1.0), 1.0);
}

TEST(closed_form, branch_examples) {
    auto r = sup_g_branch(CostKind::LZPM, 1.0, 0.0, -0.5);
    EXPECT_DOUBLE_EQ(r.value, 0.75);
    EXPECT_DOUBLE_EQ(r.argmax, -0.5);
    r = sup_g_branch(CostKind::LFPM, 1.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(r.value, 1.25);
    EXPECT_DOUBLE_EQ(r.argmax, -0.5);
    r = sup_g_branch(CostKind::LSPM, 2.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(r.value, 2.0);
    EXPECT_DOUBLE_EQ(r.argmax, -1.0);
    r = sup_g_branch(CostKind::UZPM, 1.0, 0.0, 2.0);
    EXPECT_DOUBLE_EQ(r.value, 0.0);
    EXPECT_DOUBLE_EQ(r.argmax, 0.0);
}

TEST(closed_form, compact_examples) {
    EXPECT_DOUBLE_EQ(sup_g_compact(CostKind::LZPM, 1.0, 0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(sup_g_compact(CostKind::UFPM, 1.0, 0.0, 0.0), 0.25);
    EXPECT_DOUBLE_EQ(sup_g_compact(CostKind::USPM, 2.0, 0.0, -1.0), 2.0);
}

TEST(closed_form, examples_agree_with_brute_force) {
    EXPECT_NEAR(brute_sup(CostKind::LZPM, 1.0, 0.0, -0.5), 0.75, 1e-9);
    EXPECT_NEAR(brute_sup(CostKind::LFPM, 1.0, 0.0, 1.0), 1.25, 1e-9);
    EXPECT_NEAR(brute_sup(CostKind::LSPM, 2.0, 0.0, 1.0), 2.0, 1e-9);
    EXPECT_NEAR(brute_sup(CostKind::UFPM, 1.0, 0.0, 0.0), 0.25, 1e-9);
    EXPECT_NEAR(brute_sup(CostKind::USPM, 2.0, 0.0, -1.0), 2.0, 1e-9);
}

TEST(closed_form, curvature_floor_is_enforced) {
    EXPECT_THROW(sup_g_branch(CostKind::LZPM, 0.0, 1.0, 0.0), CurvatureError);
    EXPECT_THROW(sup_g_compact(CostKind::UFPM, -1.0, 1.0, 0.0), CurvatureError);
    EXPECT_THROW(sup_g_branch(CostKind::LSPM, 1.0, 1.0, 0.0), CurvatureError);
    try {
        sup_g_compact(CostKind::USPM, 0.5, 0.0, 0.0);
        FAIL();
    } catch (const CurvatureError& e) {
        EXPECT_EQ(e.kind, CostKind::USPM);
        EXPECT_EQ(e.a, 0.5);
    }
    EXPECT_NO_THROW(sup_g_branch(CostKind::LSPM, 1.0001, 0.0, 0.0));
}

TEST(closed_form, random_draws_match_brute_force) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.2, 4.0), ub(-3.0, 3.0), ut(-3.0, 3.0);
    for (CostKind kind : all_cost_kinds) {
        for (int k = 0; k < 40; ++k) {
            const double a = ua(rng) + curvature_floor(kind);
            const double b = ub(rng), tau = ut(rng);
            const auto r = sup_g_branch(kind, a, b, tau);
            EXPECT_NEAR(r.value, brute_sup(kind, a, b, tau), 1e-7 * (1.0 + std::abs(r.value)))
                << to_string(kind) << " a=" << a << " b=" << b << " tau=" << tau;
            // the reported maximiser attains the value
            EXPECT_NEAR(cost(kind, tau, r.argmax) + g0(r.argmax, a, b), r.value, 1e-9 * (1.0 + std::abs(r.value)));
        }
    }
}

TEST(closed_form, tie_reports_maximiser_nearest_tau) {
    // tau exactly at b/a - 1/sqrt(a): x = tau and x = b/a both attain the sup
    const auto r = sup_g_branch(CostKind::LZPM, 4.0, 8.0, 1.5);
    EXPECT_DOUBLE_EQ(r.argmax, 1.5);
    EXPECT_DOUBLE_EQ(r.value, 16.0);
}
