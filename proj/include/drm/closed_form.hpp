#pragma once

#include <string>

#include "drm/errors.hpp"
#include "drm/moment_core.hpp"

namespace drm {

// g0(x; a, b) = -a x^2 + 2 b x
inline double g0(double x, double a, double b) { return -a * x * x + 2.0 * b * x; }

// Smallest admissible curvature: a > 0 for ZPM/FPM, a > 1 for SPM.
double curvature_floor(CostKind kind);

class CurvatureError : public DomainError {
public:
    CurvatureError(CostKind kind, double a);
    CostKind kind;
    double a;
};

struct Supremum {
    double value;
    double argmax;
};

// sup_x { psi_tau(x) + g0(x; a, b) } by case split. When two maximizers tie the
// one nearer tau is reported.
Supremum sup_g_branch(CostKind kind, double a, double b, double tau);

// The same supremum written as a single expression with a positive part or max.
double sup_g_compact(CostKind kind, double a, double b, double tau);

}  // namespace drm
