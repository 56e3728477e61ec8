#include "drm/closed_form.hpp"

#include <algorithm>
#include <cmath>

namespace drm {

double curvature_floor(CostKind kind) { return moment_order(kind) == 2 ? 1.0 : 0.0; }

CurvatureError::CurvatureError(CostKind kind, double a)
    : DomainError("curvature a = " + std::to_string(a) + " not admissible for " + std::string(to_string(kind))),
      kind(kind),
      a(a) {}

namespace {

void check_curvature(CostKind kind, double a) {
    if (!(a > curvature_floor(kind)) || !std::isfinite(a)) throw CurvatureError(kind, a);
}

double nearer(double tau, double u, double v) { return std::abs(v - tau) < std::abs(u - tau) ? v : u; }

}  // namespace

Supremum sup_g_branch(CostKind kind, double a, double b, double tau) {
    check_curvature(kind, a);
    const double s = b / a;
    switch (kind) {
        case CostKind::LZPM: {
            const double edge = s - 1.0 / std::sqrt(a);
            if (tau >= s) return {1.0 + g0(s, a, b), s};
            if (tau > edge) return {1.0 + g0(tau, a, b), tau};
            return {g0(s, a, b), tau == edge ? tau : s};
        }
        case CostKind::UZPM: {
            const double edge = s + 1.0 / std::sqrt(a);
            if (tau <= s) return {1.0 + g0(s, a, b), s};
            if (tau < edge) return {1.0 + g0(tau, a, b), tau};
            return {g0(s, a, b), tau == edge ? tau : s};
        }
        case CostKind::LFPM: {
            const double shifted = s - 1.0 / (2.0 * a);
            if (tau <= s - 1.0 / (4.0 * a)) {
                return {b * b / a, tau == s - 1.0 / (4.0 * a) ? nearer(tau, s, shifted) : s};
            }
            return {tau + (b - 0.5) * (b - 0.5) / a, shifted};
        }
        case CostKind::UFPM: {
            const double shifted = s + 1.0 / (2.0 * a);
            if (tau >= s + 1.0 / (4.0 * a)) {
                return {b * b / a, tau == s + 1.0 / (4.0 * a) ? nearer(tau, s, shifted) : s};
            }
            return {(b + 0.5) * (b + 0.5) / a - tau, shifted};
        }
        case CostKind::LSPM:
            if (tau <= s) return {b * b / a, s};
            return {(b * b - 2.0 * b * tau + a * tau * tau) / (a - 1.0), (b - tau) / (a - 1.0)};
        case CostKind::USPM:
            if (tau >= s) return {b * b / a, s};
            return {(b * b - 2.0 * b * tau + a * tau * tau) / (a - 1.0), (b - tau) / (a - 1.0)};
    }
    return {0.0, 0.0};
}

double sup_g_compact(CostKind kind, double a, double b, double tau) {
    check_curvature(kind, a);
    const double s = b / a;
    switch (kind) {
        case CostKind::LZPM:
            return std::max(1.0 + g0(tau, a, b), (s <= tau ? 1.0 : 0.0) + g0(s, a, b));
        case CostKind::UZPM:
            return std::max(1.0 + g0(tau, a, b), (s >= tau ? 1.0 : 0.0) + g0(s, a, b));
        case CostKind::LFPM:
            return b * b / a + std::max(tau - (s - 1.0 / (4.0 * a)), 0.0);
        case CostKind::UFPM:
            return b * b / a + std::max((s + 1.0 / (4.0 * a)) - tau, 0.0);
        case CostKind::LSPM: {
            const double d = std::max(tau - s, 0.0);
            return b * b / a + a / (a - 1.0) * d * d;
        }
        case CostKind::USPM: {
            const double d = std::max(s - tau, 0.0);
            return b * b / a + a / (a - 1.0) * d * d;
        }
    }
    return 0.0;
}

}  // namespace drm
