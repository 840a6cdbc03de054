#include "evoforge/core/metric_schema.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <iomanip>

namespace evoforge {

void validate_schema_set(std::span<const MetricSchema> schemas)
{
    std::set<std::string> names;
    int primaries = 0;
    for (const auto& s : schemas) {
        if (s.name.empty())
            throw ConfigError("metric schema with empty name");
        if (!names.insert(s.name).second)
            throw ConfigError("duplicate metric schema '" + s.name + "'");
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi))
            throw ConfigError("metric '" + s.name + "': bounds must satisfy lo < hi");
        if (s.precision < 0)
            throw ConfigError("metric '" + s.name + "': precision must be non-negative");
        if (!(s.significance >= 0.0) || !std::isfinite(s.significance))
            throw ConfigError("metric '" + s.name + "': significance must be non-negative");
        if (s.is_primary)
            ++primaries;
    }
    if (primaries != 1)
        throw ConfigError("expected exactly one primary metric, found " + std::to_string(primaries));
}

const MetricSchema& primary_schema(std::span<const MetricSchema> schemas)
{
    auto it = std::find_if(schemas.begin(), schemas.end(), [](const auto& s) { return s.is_primary; });
    if (it == schemas.end())
        throw ConfigError("no primary metric declared");
    return *it;
}

const MetricSchema* find_schema(std::span<const MetricSchema> schemas, std::string_view name)
{
    for (const auto& s : schemas) {
        if (s.name == name)
            return &s;
    }
    return nullptr;
}

std::uint32_t bin_index(double value, const MetricSchema& schema, std::uint32_t n_bins)
{
    if (n_bins == 0)
        throw ConfigError("bin count must be positive");
    if (std::isnan(value))
        return 0;
    double clamped = std::clamp(value, schema.lo, schema.hi);
    double scaled = (clamped - schema.lo) / (schema.hi - schema.lo) * static_cast<double>(n_bins);
    auto bin = static_cast<std::uint32_t>(std::floor(scaled));
    return std::min(bin, n_bins - 1);
}

bool is_significant_improvement(double candidate, double incumbent, const MetricSchema& schema)
{
    if (!std::isfinite(candidate) || !std::isfinite(incumbent))
        throw CorruptMetricsError("non-finite value for metric '" + schema.name + "'");
    double delta = directed_delta(incumbent, candidate, schema);
    if (schema.significance == 0.0)
        return delta > 0.0;
    // Deltas that land exactly on the threshold count; absorb representation
    // error from the subtraction (0.0366 - 0.0365 is 9.99...e-5 in binary).
    double slack = 1e-12 * std::max({1.0, std::abs(candidate), std::abs(incumbent)});
    return delta > 0.0 && delta >= schema.significance - slack;
}

double normalized_fitness(double value, const MetricSchema& schema)
{
    double clamped = std::clamp(value, schema.lo, schema.hi);
    double t = (clamped - schema.lo) / (schema.hi - schema.lo);
    return schema.higher_is_better ? t : 1.0 - t;
}

double directed_delta(double from, double to, const MetricSchema& schema)
{
    return schema.higher_is_better ? to - from : from - to;
}

std::string format_metric(double value, const MetricSchema& schema)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(schema.precision) << value;
    return out.str();
}

double worst_value(const MetricSchema& schema)
{
    return schema.higher_is_better ? schema.lo : schema.hi;
}

void to_json(nlohmann::json& j, const MetricSchema& s)
{
    j = nlohmann::json{
        {"name", s.name},
        {"higher_is_better", s.higher_is_better},
        {"bounds", {s.lo, s.hi}},
        {"precision", s.precision},
        {"significance", s.significance},
        {"is_primary", s.is_primary},
    };
}

void from_json(const nlohmann::json& j, MetricSchema& s)
{
    s.name = j.at("name").get<std::string>();
    s.higher_is_better = j.value("higher_is_better", true);
    const auto& bounds = j.at("bounds");
    if (!bounds.is_array() || bounds.size() != 2)
        throw ConfigError("metric '" + s.name + "': bounds must be [lo, hi]");
    s.lo = bounds[0].get<double>();
    s.hi = bounds[1].get<double>();
    s.precision = j.value("precision", 4);
    s.significance = j.value("significance", 0.0);
    s.is_primary = j.value("is_primary", false);
}

} // namespace evoforge
