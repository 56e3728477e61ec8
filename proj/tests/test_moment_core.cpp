#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "drm/errors.hpp"
#include "drm/moment_core.hpp"
#include "iphone.hpp"

using namespace drm;

TEST(moment_core, two_point_moments) {
    const auto m = test::two_point_sample().moments();
    EXPECT_DOUBLE_EQ(m.mu(), 11.0);
    EXPECT_DOUBLE_EQ(m.sigma(), 1.0);
    EXPECT_DOUBLE_EQ(m.second_moment(), 122.0);
}

TEST(moment_core, iphone_moments) {
    const auto m = test::iphone_sample().moments();
    EXPECT_NEAR(m.mu(), 122.345, 1e-3);
    EXPECT_NEAR(m.sigma(), 85.326, 1e-3);
}

TEST(moment_core, constant_sample_has_zero_sigma) {
    const auto m = EmpiricalSample({3.5, 3.5, 3.5}).moments();
    EXPECT_DOUBLE_EQ(m.mu(), 3.5);
    EXPECT_DOUBLE_EQ(m.sigma(), 0.0);
}

TEST(moment_core, sample_is_sorted) {
    EmpiricalSample s({3.0, -1.0, 2.0});
    EXPECT_EQ(s[0], -1.0);
    EXPECT_EQ(s[2], 3.0);
}

TEST(moment_core, rejects_bad_inputs) {
    EXPECT_THROW(EmpiricalSample({}), DomainError);
    EXPECT_THROW(EmpiricalSample({1.0, std::nan("")}), DomainError);
    EXPECT_THROW(MomentSpec(0.0, -1.0), DomainError);
    EXPECT_THROW(ProblemSpec(CostKind::LZPM, 0.0, MomentSpec(0, 1), EmpiricalSample({0.0}), -0.1), DomainError);
}

TEST(moment_core, empirical_cost_examples) {
    EXPECT_NEAR(empirical_cost(CostKind::UFPM, 221.77, test::iphone_sample()), 0.7875, 1e-4);
    EXPECT_EQ(empirical_cost(CostKind::LZPM, 0.0, test::iphone_sample()), 0.0);
    EXPECT_EQ(empirical_cost(CostKind::UZPM, 11.5, test::two_point_sample()), 0.5);
}

TEST(moment_core, indicator_costs_count_ties_on_both_sides) {
    EXPECT_EQ(cost(CostKind::LZPM, 1.0, 1.0), 1.0);
    EXPECT_EQ(cost(CostKind::UZPM, 1.0, 1.0), 1.0);
    EXPECT_EQ(cost(CostKind::LSPM, 1.0, -1.0), 4.0);
    EXPECT_EQ(cost(CostKind::USPM, 1.0, -1.0), 0.0);
    EXPECT_EQ(cost(CostKind::UFPM, 1.0, 3.0), 2.0);
}

TEST(moment_core, quantile_midpoint_convention) {
    const auto s = test::iphone_sample();
    EXPECT_NEAR(quantile(s, 0.9), 221.77, 1e-9);
    EXPECT_NEAR(quantile(s, 0.5), 137.655, 1e-9);
    EXPECT_DOUBLE_EQ(quantile(s, 1.0), 231.22);
    EXPECT_DOUBLE_EQ(quantile(s, 0.0), 1.39);
    EXPECT_THROW(quantile(s, 1.5), DomainError);
}

TEST(moment_core, quantile_is_monotone) {
    const auto s = test::iphone_sample();
    double prev = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100; ++k) {
        const double q = quantile(s, k / 100.0);
        EXPECT_GE(q, prev);
        prev = q;
    }
}

TEST(moment_core, cost_kind_names) {
    for (CostKind k : all_cost_kinds) EXPECT_EQ(parse_cost_kind(to_string(k)), k);
    EXPECT_EQ(parse_cost_kind("ufpm"), CostKind::UFPM);
    EXPECT_THROW(parse_cost_kind("cvar"), UsageError);
}

TEST(moment_core, pairwise_sum_matches_naive_on_integers) {
    std::vector<double> v(1000);
    for (int i = 0; i < 1000; ++i) v[i] = i;
    EXPECT_EQ(pairwise_sum(v), 499500.0);
}
