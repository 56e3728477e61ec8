#include <gtest/gtest.h>

#include <cmath>

#include "drm/calibration.hpp"
#include "drm/errors.hpp"
#include "iphone.hpp"

using namespace drm;

TEST(calibration, zero_radius_has_tail_probability_one) {
    EXPECT_EQ(delta_to_alpha(12, 231.0, 0.0), 1.0);
    EXPECT_EQ(delta_to_alpha(60, 0.5, 0.0), 1.0);
}

TEST(calibration, iphone_radius) {
    EXPECT_NEAR(delta_to_alpha(12, 231.0, 290.0), 0.05, 0.005);
    EXPECT_NEAR(confidence_to_delta(12, 231.0, 0.95), 290.0, 15.0);
}

TEST(calibration, portfolio_radii) {
    EXPECT_NEAR(confidence_to_delta(60, 30.0, 0.95), 15.4, 0.8);
    EXPECT_NEAR(confidence_to_delta(60, 43.3, 0.95), 22.1, 1.1);
}

TEST(calibration, alpha_strictly_decreasing) {
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double a = delta_to_alpha(30, 10.0, 0.5 * k);
        EXPECT_LT(a, prev);
        prev = a;
    }
}

TEST(calibration, round_trip) {
    for (double beta : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        for (auto [n, r] : {std::pair<std::size_t, double>{12, 231.0}, {60, 30.0}, {5, 0.1}}) {
            const double d = confidence_to_delta(n, r, beta);
            EXPECT_LE(std::abs(delta_to_alpha(n, r, d) - (1.0 - beta)), 1e-8);
        }
    }
}

TEST(calibration, input_validation) {
    EXPECT_THROW(delta_to_alpha(0, 1.0, 1.0), DomainError);
    EXPECT_THROW(delta_to_alpha(3, 0.0, 1.0), DomainError);
    EXPECT_THROW(confidence_to_delta(3, 1.0, 1.0), DomainError);
    EXPECT_THROW(confidence_to_delta(3, 1.0, 0.0), DomainError);
}

TEST(calibration, support_radius_of_iphone_sample) {
    // farthest point from the mean is the smallest sale
    EXPECT_NEAR(support_radius(test::iphone_sample()), 122.345 - 1.39, 1e-9);
}

TEST(calibration, w2_examples) {
    const EmpiricalSample a({1.0, 4.0, 2.0});
    EXPECT_EQ(w2_empirical(a, a), 0.0);
    EXPECT_DOUBLE_EQ(w2_empirical(EmpiricalSample({2.0}), EmpiricalSample({-1.5})), 3.5);
    EXPECT_DOUBLE_EQ(w2_empirical(EmpiricalSample({0.0, 2.0}), EmpiricalSample({1.0, 3.0})), 1.0);
    EXPECT_THROW(w2_empirical(a, EmpiricalSample({1.0})), DomainError);
}

TEST(calibration, w2_sorted_coupling_beats_every_permutation) {
    const std::vector<double> x{0.3, -1.2, 2.5, 0.9}, y{1.1, 0.0, -0.7, 3.3};
    std::vector<int> perm{0, 1, 2, 3};
    double best = 1e300;
    do {
        double s = 0;
        for (int i = 0; i < 4; ++i) s += (x[i] - y[perm[i]]) * (x[i] - y[perm[i]]);
        best = std::min(best, std::sqrt(s / 4));
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(w2_empirical(EmpiricalSample(x), EmpiricalSample(y)), best, 1e-12);
}
