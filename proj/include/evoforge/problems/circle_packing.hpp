#pragma once

#include "evoforge/problems/validation.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace evoforge::problems {

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
};

struct CirclePacking {
    std::vector<Circle> circles;
};

inline constexpr double kCircleTolerance = 1e-9;

/// Metrics {is_valid, sum_radii}. Circles must lie in the unit square and be
/// pairwise disjoint, both up to `tolerance`.
ValidationReport circle_packing_validate(const CirclePacking& packing, std::size_t n_required,
                                         double tolerance = kCircleTolerance);

/// raw: list of [cx, cy, r].
ValidationReport circle_packing_validate(const nlohmann::json& raw, std::size_t n_required,
                                         double tolerance = kCircleTolerance);

} // namespace evoforge::problems
