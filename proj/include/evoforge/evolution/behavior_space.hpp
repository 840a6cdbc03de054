#pragma once

#include "evoforge/core/behavior.hpp"
#include "evoforge/core/metric_schema.hpp"
#include "evoforge/core/program.hpp"

#include <span>

namespace evoforge::evolution {

struct BehaviorDim {
    std::string metric;
    std::uint32_t bins = 16;

    bool operator==(const BehaviorDim&) const = default;
};

/// Descriptor grid of one island. With validity_dim a 2-bin is_valid axis
/// is appended after `dims`.
struct BehaviorSpaceSpec {
    std::vector<BehaviorDim> dims;
    bool validity_dim = true;

    bool operator==(const BehaviorSpaceSpec&) const = default;

    /// Throws ConfigError when empty, a bin count is zero or a metric has
    /// no schema.
    void validate(std::span<const MetricSchema> schemas) const;
};

/// Single fitness axis on the primary metric plus validity.
BehaviorSpaceSpec fitness_validity_space(std::span<const MetricSchema> schemas, std::uint32_t bins = 16);

/// Throws ConfigError for a dimension without schema and CorruptMetricsError
/// for a missing or non-finite value.
BehaviorCell map_to_cell(const Metrics& metrics, const BehaviorSpaceSpec& space,
                         std::span<const MetricSchema> schemas);

void to_json(nlohmann::json& j, const BehaviorDim& d);
void from_json(const nlohmann::json& j, BehaviorDim& d);
void to_json(nlohmann::json& j, const BehaviorSpaceSpec& s);
void from_json(const nlohmann::json& j, BehaviorSpaceSpec& s);

} // namespace evoforge::evolution
