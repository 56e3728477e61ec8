#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drm {

// Six cost functionals psi_tau. Z = zero (indicator), F = first, S = second
// partial moment; L/U = lower/upper tail.
enum class CostKind { LZPM, UZPM, LFPM, UFPM, LSPM, USPM };

inline constexpr CostKind all_cost_kinds[] = {CostKind::LZPM, CostKind::UZPM, CostKind::LFPM,
                                              CostKind::UFPM, CostKind::LSPM, CostKind::USPM};

std::string_view to_string(CostKind kind);
CostKind parse_cost_kind(std::string_view text);  // accepts LZPM..USPM, case-insensitive

int moment_order(CostKind kind);  // 0, 1 or 2
bool is_lower(CostKind kind);

// psi_tau(x). The indicator kinds count ties (x == tau) on both sides.
double cost(CostKind kind, double tau, double x);

class MomentSpec {
public:
    MomentSpec(double mu, double sigma);

    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double second_moment() const { return mu_ * mu_ + sigma_ * sigma_; }

private:
    double mu_;
    double sigma_;
};

// Nonempty finite sample, stored sorted ascending.
class EmpiricalSample {
public:
    explicit EmpiricalSample(std::vector<double> points);

    std::span<const double> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double min() const { return points_.front(); }
    double max() const { return points_.back(); }

    double mean() const;
    double variance() const;  // population (1/n)
    double stddev() const;
    double mean_of_squares() const;

    MomentSpec moments() const;

private:
    std::vector<double> points_;
};

struct ProblemSpec {
    ProblemSpec(CostKind kind, double tau, MomentSpec moments, EmpiricalSample sample, double delta);

    CostKind kind;
    double tau;
    MomentSpec moments;
    EmpiricalSample sample;
    double delta;
};

// Midpoint plotting position: rank p*n + 1/2 (1-based), clamped to [1, n], linear
// interpolation between order statistics.
double quantile(const EmpiricalSample& sample, double p);

// Expectation of psi_tau under the empirical measure.
double empirical_cost(CostKind kind, double tau, const EmpiricalSample& sample);

// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);

}  // namespace drm
