#include "evoforge/evolution/behavior_space.hpp"

#include "evoforge/core/error.hpp"

#include <cmath>

namespace evoforge::evolution {

using json = nlohmann::json;

void BehaviorSpaceSpec::validate(std::span<const MetricSchema> schemas) const
{
    if (dims.empty())
        throw ConfigError("behavior space needs at least one dimension");
    for (const auto& d : dims) {
        if (d.bins == 0)
            throw ConfigError("behavior dimension '" + d.metric + "' has zero bins");
        if (!find_schema(schemas, d.metric))
            throw ConfigError("behavior dimension '" + d.metric + "' has no metric schema");
    }
}

BehaviorSpaceSpec fitness_validity_space(std::span<const MetricSchema> schemas, std::uint32_t bins)
{
    return BehaviorSpaceSpec{{{primary_schema(schemas).name, bins}}, true};
}

BehaviorCell map_to_cell(const Metrics& metrics, const BehaviorSpaceSpec& space,
                         std::span<const MetricSchema> schemas)
{
    BehaviorCell cell;
    auto value_of = [&](std::string_view name) {
        auto it = metrics.find(name);
        if (it == metrics.end())
            throw CorruptMetricsError("metric '" + std::string(name) + "' is missing");
        if (!std::isfinite(it->second))
            throw CorruptMetricsError("metric '" + std::string(name) + "' is not finite");
        return it->second;
    };
    for (const auto& d : space.dims) {
        const auto* schema = find_schema(schemas, d.metric);
        if (!schema)
            throw ConfigError("behavior dimension '" + d.metric + "' has no metric schema");
        cell.coords.push_back(bin_index(value_of(d.metric), *schema, d.bins));
    }
    if (space.validity_dim)
        cell.coords.push_back(value_of(kIsValid) == 1.0 ? 1u : 0u);
    return cell;
}

void to_json(json& j, const BehaviorDim& d)
{
    j = json{{"metric", d.metric}, {"bins", d.bins}};
}

void from_json(const json& j, BehaviorDim& d)
{
    d.metric = j.at("metric").get<std::string>();
    d.bins = j.value("bins", 16u);
}

void to_json(json& j, const BehaviorSpaceSpec& s)
{
    j = json{{"dims", s.dims}, {"validity_dim", s.validity_dim}};
}

void from_json(const json& j, BehaviorSpaceSpec& s)
{
    s.dims = j.at("dims").get<std::vector<BehaviorDim>>();
    s.validity_dim = j.value("validity_dim", true);
}

} // namespace evoforge::evolution
