#pragma once

#include "evoforge/problems/validation.hpp"

#include <nlohmann/json.hpp>

namespace evoforge::problems {

/// One-parameter toy objective: score = 1 - (x - target)^2 for a number
/// x in [0, 1]. Anything else is invalid.
ValidationReport toy_quadratic_validate(const nlohmann::json& raw, double target = 0.7);

} // namespace evoforge::problems
