#include "evoforge/evolution/selection.hpp"

#include <algorithm>

namespace evoforge::evolution {

double selection_weight(const Elite& elite, const MetricSchema& primary, double floor)
{
    auto valid = elite.metrics.find(kIsValid);
    if (valid == elite.metrics.end() || valid->second != 1.0)
        return floor;
    auto value = elite.metrics.find(primary.name);
    if (value == elite.metrics.end())
        return floor;
    return normalized_fitness(value->second, primary) + floor;
}

std::vector<ProgramId> select_parents(const Island& island, std::size_t k, Rng& rng,
                                      std::span<const MetricSchema> schemas, double floor)
{
    if (island.empty())
        throw EmptyIsland("island '" + island.id() + "' has no elites to select from");
    const auto& primary = primary_schema(schemas);
    std::vector<const Elite*> elites;
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& [_, e] : island.cells()) {
        total += selection_weight(e, primary, floor);
        elites.push_back(&e);
        cumulative.push_back(total);
    }
    std::vector<ProgramId> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        double r = rng.uniform01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), elites.size() - 1);
        out.push_back(elites[idx]->id);
    }
    return out;
}

} // namespace evoforge::evolution
