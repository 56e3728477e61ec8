#pragma once

#include <cstddef>
#include <string_view>

#include "drm/dual_objective.hpp"

namespace drm {

enum class Method { DD, SM };

inline std::string_view to_string(Method m) { return m == Method::DD ? "dd" : "sm"; }

struct BoundResult {
    double value = 0.0;
    DualPoint argmin;
    Method method = Method::DD;
    std::size_t iterations = 0;  // DD: objective evaluations in xi; SM: feasible cells scanned
    double xi_star = 0.0;
    std::size_t traversals = 0;  // DD: total region/segment moves over all planes
    std::size_t max_plane_traversals = 0;
};

}  // namespace drm
