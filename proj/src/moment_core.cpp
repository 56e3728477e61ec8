#include "drm/moment_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "drm/errors.hpp"

namespace drm {

std::string_view to_string(CostKind kind) {
    switch (kind) {
        case CostKind::LZPM: return "LZPM";
        case CostKind::UZPM: return "UZPM";
        case CostKind::LFPM: return "LFPM";
        case CostKind::UFPM: return "UFPM";
        case CostKind::LSPM: return "LSPM";
        case CostKind::USPM: return "USPM";
    }
    return "?";
}

CostKind parse_cost_kind(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (CostKind k : all_cost_kinds) {
        if (upper == to_string(k)) return k;
    }
    throw UsageError("unknown cost kind '" + std::string(text) + "' (expected LZPM, UZPM, LFPM, UFPM, LSPM or USPM)");
}

int moment_order(CostKind kind) {
    switch (kind) {
        case CostKind::LZPM:
        case CostKind::UZPM: return 0;
        case CostKind::LFPM:
        case CostKind::UFPM: return 1;
        default: return 2;
    }
}

bool is_lower(CostKind kind) {
    return kind == CostKind::LZPM || kind == CostKind::LFPM || kind == CostKind::LSPM;
}

double cost(CostKind kind, double tau, double x) {
    switch (kind) {
        case CostKind::LZPM: return x <= tau ? 1.0 : 0.0;
        case CostKind::UZPM: return x >= tau ? 1.0 : 0.0;
        case CostKind::LFPM: return std::max(tau - x, 0.0);
        case CostKind::UFPM: return std::max(x - tau, 0.0);
        case CostKind::LSPM: {
            double d = std::max(tau - x, 0.0);
            return d * d;
        }
        case CostKind::USPM: {
            double d = std::max(x - tau, 0.0);
            return d * d;
        }
    }
    return 0.0;
}

MomentSpec::MomentSpec(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!std::isfinite(mu) || !std::isfinite(sigma)) throw DomainError("moments must be finite");
    if (sigma < 0.0) throw DomainError("sigma must be nonnegative");
}

EmpiricalSample::EmpiricalSample(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("empirical sample is empty");
    for (double x : points_) {
        if (!std::isfinite(x)) throw DomainError("empirical sample contains a non-finite value");
    }
    std::sort(points_.begin(), points_.end());
}

double EmpiricalSample::mean() const {
    return pairwise_sum(points_) / static_cast<double>(points_.size());
}

double EmpiricalSample::variance() const {
    double m = mean();
    std::vector<double> sq(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) sq[i] = (points_[i] - m) * (points_[i] - m);
    return pairwise_sum(sq) / static_cast<double>(points_.size());
}

double EmpiricalSample::stddev() const { return std::sqrt(variance()); }

double EmpiricalSample::mean_of_squares() const {
    std::vector<double> sq(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) sq[i] = points_[i] * points_[i];
    return pairwise_sum(sq) / static_cast<double>(points_.size());
}

MomentSpec EmpiricalSample::moments() const { return MomentSpec(mean(), stddev()); }

ProblemSpec::ProblemSpec(CostKind kind, double tau, MomentSpec moments, EmpiricalSample sample, double delta)
    : kind(kind), tau(tau), moments(moments), sample(std::move(sample)), delta(delta) {
    if (!std::isfinite(tau)) throw DomainError("tau must be finite");
    if (!std::isfinite(delta) || delta < 0.0) throw DomainError("delta must be finite and nonnegative");
}

double quantile(const EmpiricalSample& sample, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    const std::size_t n = sample.size();
    double rank = p * static_cast<double>(n) + 0.5;
    rank = std::clamp(rank, 1.0, static_cast<double>(n));
    auto lo = static_cast<std::size_t>(std::floor(rank));
    double frac = rank - static_cast<double>(lo);
    if (lo >= n) return sample[n - 1];
    return sample[lo - 1] + frac * (sample[lo] - sample[lo - 1]);
}

double empirical_cost(CostKind kind, double tau, const EmpiricalSample& sample) {
    std::vector<double> v(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) v[i] = cost(kind, tau, sample[i]);
    return pairwise_sum(v) / static_cast<double>(sample.size());
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace drm
