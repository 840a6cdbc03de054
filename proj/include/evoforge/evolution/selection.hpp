#pragma once

#include "evoforge/core/random.hpp"
#include "evoforge/evolution/island.hpp"

namespace evoforge::evolution {

/// Selection from an island that has no elites yet; the loop should wait
/// for completions.
class EmptyIsland : public Error {
public:
    using Error::Error;
};

inline constexpr double kSelectionFloor = 0.01;

/// Selection weight of one elite: normalized primary fitness + floor when
/// valid, the floor alone otherwise.
double selection_weight(const Elite& elite, const MetricSchema& primary, double floor = kSelectionFloor);

/// k elites drawn with replacement, fitness-proportionally. Cells are
/// scanned in key order so draws are reproducible.
std::vector<ProgramId> select_parents(const Island& island, std::size_t k, Rng& rng,
                                      std::span<const MetricSchema> schemas, double floor = kSelectionFloor);

} // namespace evoforge::evolution
