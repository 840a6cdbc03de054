#pragma once

#include "evoforge/problems/geometry.hpp"
#include "evoforge/problems/validation.hpp"

#include <nlohmann/json.hpp>

namespace evoforge::problems {

/// Metrics {is_valid, min_area}. Valid iff exactly n_required points, all
/// inside-or-on unit_triangle(), pairwise distinct and min area > 0.
ValidationReport heilbronn_validate(const PointSet& ps, std::size_t n_required = 11);

/// Total over arbitrary JSON: anything but a list of [x, y] number pairs is
/// reported as malformed.
ValidationReport heilbronn_validate(const nlohmann::json& raw, std::size_t n_required = 11);

} // namespace evoforge::problems
