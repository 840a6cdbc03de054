#pragma once

#include "evoforge/core/random.hpp"
#include "evoforge/problems/validation.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace evoforge::problems {

struct PackingInstance {
    std::vector<double> items;
    double capacity = 1.0;
};

/// Bin index per item, bins numbered in opening order.
using PackingAssignment = std::vector<std::size_t>;

inline constexpr double kCapacityTolerance = 1e-9;
inline constexpr std::size_t kExactOptimumMaxItems = 15;

/// ceil(sum / capacity). Throws evoforge::Error when an item is not in
/// (0, capacity].
std::size_t binpacking_lower_bound(const std::vector<double>& items, double capacity);

/// Exact optimum by branch and bound; nullopt above kExactOptimumMaxItems.
std::optional<std::size_t> binpacking_exact_optimum(const std::vector<double>& items, double capacity);

/// Online first fit: each item goes to the lowest-numbered open bin with room.
PackingAssignment first_fit(const std::vector<double>& items, double capacity);

/// Metrics {is_valid, excess_fraction, excess_bins}: per instance
/// (bins_used - lower_bound) / lower_bound, averaged. excess_fraction is
/// omitted for invalid assignments.
ValidationReport binpacking_validate(const std::vector<PackingAssignment>& assignments,
                                     const std::vector<PackingInstance>& instances);

/// raw: list of per-instance bin-index lists.
ValidationReport binpacking_validate(const nlohmann::json& raw, const std::vector<PackingInstance>& instances);

/// Integer item sizes uniform in [20, 100], capacity 150.
std::vector<PackingInstance> generate_uniform_instances(std::size_t count, std::size_t n_items, std::uint64_t seed);

/// Weibull(shape 3, scale 45) sizes rounded and clipped to [1, 100],
/// capacity 100.
std::vector<PackingInstance> generate_weibull_instances(std::size_t count, std::size_t n_items, std::uint64_t seed);

/// {"instances": [{"capacity": c, "items": [...]}, ...]}
nlohmann::json instances_to_json(const std::vector<PackingInstance>& instances);
std::vector<PackingInstance> instances_from_json(const nlohmann::json& j);

/// Mean excess fraction of first_fit over the instances.
double first_fit_mean_excess(const std::vector<PackingInstance>& instances);

} // namespace evoforge::problems
