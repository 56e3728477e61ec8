#include "drm/classical_bounds.hpp"

#include <algorithm>
#include <cmath>

namespace drm {

double classical_bound(CostKind kind, const MomentSpec& moments, double tau) {
    const double mu = moments.mu();
    const double var = moments.sigma() * moments.sigma();
    const double d = tau - mu;
    switch (kind) {
        case CostKind::LZPM: return tau >= mu ? 1.0 : var / (var + d * d);
        case CostKind::UZPM: return tau <= mu ? 1.0 : var / (var + d * d);
        case CostKind::LFPM: return 0.5 * (d + std::sqrt(var + d * d));
        case CostKind::UFPM: return 0.5 * (-d + std::sqrt(var + d * d));
        case CostKind::LSPM: {
            const double e = std::max(d, 0.0);
            return e * e + var;
        }
        case CostKind::USPM: {
            const double e = std::max(-d, 0.0);
            return e * e + var;
        }
    }
    return 0.0;
}

}  // namespace drm
