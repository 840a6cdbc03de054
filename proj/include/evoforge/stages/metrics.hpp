#pragma once

#include "evoforge/core/metric_schema.hpp"
#include "evoforge/core/program.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <span>

namespace evoforge::stages {

/// loc: non-blank lines that are not comments; chars: UTF-8 code points.
Metrics compute_complexity(std::string_view source);

/// Numeric JSON object to Metrics; booleans map to 0/1. Throws Error naming
/// the first non-numeric entry.
Metrics metrics_from_json(const nlohmann::json& j);

/// Union of both maps (validator wins on collision), then every schema is
/// filled: missing or non-finite entries get the worst bound, is_valid is
/// forced to 0 when the primary metric was missing and normalized to 0/1.
Metrics merge_and_ensure_metrics(const std::optional<Metrics>& validator, const Metrics& complexity,
                                 std::span<const MetricSchema> schemas);

} // namespace evoforge::stages
