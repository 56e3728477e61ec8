#pragma once

#include "drm/moment_core.hpp"

namespace drm {

// Sharp bound on sup E[psi_tau(X)] over all laws with mean mu and stddev sigma.
double classical_bound(CostKind kind, const MomentSpec& moments, double tau);

}  // namespace drm
