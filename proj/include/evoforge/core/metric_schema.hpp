#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evoforge {

/// Declarative metadata for one metric of a problem.
struct MetricSchema {
    std::string name;
    bool higher_is_better = true;
    double lo = 0.0;
    double hi = 1.0;
    int precision = 4;         ///< display decimals only; stored values keep full precision
    double significance = 0.0; ///< minimum meaningful improvement
    bool is_primary = false;

    bool operator==(const MetricSchema&) const = default;
};

/// Name of the mandatory validity metric carried by every evaluated program.
inline constexpr std::string_view kIsValid = "is_valid";

/// Checks lo < hi, non-negative precision/significance, unique names and
/// exactly one primary schema. Throws ConfigError naming the first problem.
void validate_schema_set(std::span<const MetricSchema> schemas);

/// The unique primary schema. Throws ConfigError when absent.
const MetricSchema& primary_schema(std::span<const MetricSchema> schemas);

/// Schema lookup by name, nullptr when absent.
const MetricSchema* find_schema(std::span<const MetricSchema> schemas, std::string_view name);

/// Half-open uniform bins over [lo, hi]; values are clamped and `hi` lands in
/// the last bin.
std::uint32_t bin_index(double value, const MetricSchema& schema, std::uint32_t n_bins);

/// True iff the candidate beats the incumbent by at least `significance`
/// in the schema's direction; with significance 0 the gain must be strictly
/// positive. Throws CorruptMetricsError on non-finite input.
bool is_significant_improvement(double candidate, double incumbent, const MetricSchema& schema);

/// Clamped position of `value` in [0, 1], 1 meaning best.
double normalized_fitness(double value, const MetricSchema& schema);

/// Signed improvement, positive when `to` is better than `from`.
double directed_delta(double from, double to, const MetricSchema& schema);

/// Fixed-point rendering with `schema.precision` decimals.
std::string format_metric(double value, const MetricSchema& schema);

/// The value that fills a missing metric: lo when higher is better, else hi.
double worst_value(const MetricSchema& schema);

void to_json(nlohmann::json& j, const MetricSchema& s);
void from_json(const nlohmann::json& j, MetricSchema& s);

} // namespace evoforge
