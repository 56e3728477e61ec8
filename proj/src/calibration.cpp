#include "drm/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "drm/errors.hpp"

namespace drm {

namespace {

void check_inputs(std::size_t n, double r) {
    if (n == 0) throw DomainError("sample size must be positive");
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("support radius must be positive");
}

}  // namespace

double delta_to_alpha(std::size_t n, double r, double delta) {
    check_inputs(n, r);
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("delta must be nonnegative");
    // 8r + 4d + 6 - 2 sqrt(16r^2 + 16rd + 24r + 12d + 9), rationalised: the
    // difference of squares collapses to 16 d^2.
    const double u = 4.0 * r + 2.0 * delta + 3.0;
    const double v = std::sqrt(16.0 * r * r + 16.0 * r * delta + 24.0 * r + 12.0 * delta + 9.0);
    const double gap = 8.0 * delta * delta / (u + v);
    const double alpha = std::exp(-static_cast<double>(n) * gap / (3.0 + 4.0 * r));
    return std::clamp(alpha, std::numeric_limits<double>::min(), 1.0);
}

double confidence_to_delta(std::size_t n, double r, double beta) {
    check_inputs(n, r);
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    const double target = 1.0 - beta;
    double lo = 0.0;
    double hi = 1.0;
    while (delta_to_alpha(n, r, hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw SolverFailure("confidence_to_delta: bracket expansion overflowed");
    }
    for (int it = 0; it < 400 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (delta_to_alpha(n, r, mid) > target) lo = mid;
        else hi = mid;
    }
    return hi;
}

double support_radius(const EmpiricalSample& sample) {
    const double m = sample.mean();
    return std::max(std::abs(sample.max() - m), std::abs(sample.min() - m));
}

double w2_empirical(const EmpiricalSample& a, const EmpiricalSample& b) {
    if (a.size() != b.size()) throw DomainError("w2_empirical: samples differ in size");
    std::vector<double> sq(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sq[i] = (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(a.size()));
}

}  // namespace drm
