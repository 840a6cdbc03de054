#include "evoforge/problems/bin_packing.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace evoforge::problems {

namespace {

using json = nlohmann::json;

void check_items(const std::vector<double>& items, double capacity)
{
    if (!(capacity > 0.0) || !std::isfinite(capacity))
        throw Error("bin capacity must be positive");
    for (double x : items)
        if (!(x > 0.0) || x > capacity || !std::isfinite(x))
            throw Error("item size " + std::to_string(x) + " outside (0, " + std::to_string(capacity) + "]");
}

} // namespace

std::size_t binpacking_lower_bound(const std::vector<double>& items, double capacity)
{
    check_items(items, capacity);
    const double total = std::accumulate(items.begin(), items.end(), 0.0);
    // Slack absorbs summation error for sums that are exact multiples.
    return static_cast<std::size_t>(std::ceil(total / capacity - 1e-9));
}

std::optional<std::size_t> binpacking_exact_optimum(const std::vector<double>& items, double capacity)
{
    check_items(items, capacity);
    if (items.size() > kExactOptimumMaxItems)
        return std::nullopt;
    if (items.empty())
        return 0;
    std::vector<double> sorted = items;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    const auto ffd = first_fit(sorted, capacity);
    std::size_t best = *std::max_element(ffd.begin(), ffd.end()) + 1;
    const std::size_t bound = binpacking_lower_bound(items, capacity);
    std::vector<double> loads;

    std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (best == bound)
            return;
        if (i == sorted.size()) {
            best = std::min(best, loads.size());
            return;
        }
        for (std::size_t b = 0; b < loads.size(); ++b) {
            if (loads[b] + sorted[i] <= capacity + kCapacityTolerance) {
                // Bins with equal load are interchangeable.
                bool seen = false;
                for (std::size_t e = 0; e < b; ++e)
                    seen = seen || loads[e] == loads[b];
                if (seen)
                    continue;
                loads[b] += sorted[i];
                place(i + 1);
                loads[b] -= sorted[i];
            }
        }
        if (loads.size() + 1 < best) {
            loads.push_back(sorted[i]);
            place(i + 1);
            loads.pop_back();
        }
    };
    place(0);
    return best;
}

PackingAssignment first_fit(const std::vector<double>& items, double capacity)
{
    PackingAssignment out;
    out.reserve(items.size());
    std::vector<double> loads;
    for (double x : items) {
        std::size_t b = 0;
        while (b < loads.size() && loads[b] + x > capacity + kCapacityTolerance)
            ++b;
        if (b == loads.size())
            loads.push_back(0.0);
        loads[b] += x;
        out.push_back(b);
    }
    return out;
}

ValidationReport binpacking_validate(const std::vector<PackingAssignment>& assignments,
                                     const std::vector<PackingInstance>& instances)
{
    if (instances.empty())
        return invalid_report("context", "no instances supplied");
    if (assignments.size() != instances.size())
        return invalid_report("length", "expected " + std::to_string(instances.size()) + " assignments, got " +
                                            std::to_string(assignments.size()));
    double fraction_sum = 0.0;
    double excess_sum = 0.0;
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& inst = instances[n];
        const auto& asg = assignments[n];
        const std::string where = "instance " + std::to_string(n);
        if (asg.size() != inst.items.size())
            return invalid_report("length", where + ": expected " + std::to_string(inst.items.size()) +
                                                " bin indices, got " + std::to_string(asg.size()));
        std::vector<double> loads;
        for (std::size_t i = 0; i < asg.size(); ++i) {
            const std::size_t b = asg[i];
            if (b > loads.size())
                return invalid_report("online", where + ": item " + std::to_string(i) + " uses bin " +
                                                    std::to_string(b) + " before bin " +
                                                    std::to_string(loads.size()) + " was opened");
            if (b == loads.size())
                loads.push_back(0.0);
            loads[b] += inst.items[i];
            if (loads[b] > inst.capacity + kCapacityTolerance)
                return invalid_report("capacity", where + ": bin " + std::to_string(b) + " overflows");
        }
        const std::size_t lb = binpacking_lower_bound(inst.items, inst.capacity);
        const double excess = static_cast<double>(loads.size()) - static_cast<double>(lb);
        excess_sum += excess;
        fraction_sum += lb == 0 ? 0.0 : excess / static_cast<double>(lb);
    }
    const double count = static_cast<double>(instances.size());
    return ValidationReport{Metrics{{std::string(kIsValid), 1.0},
                                    {"excess_fraction", fraction_sum / count},
                                    {"excess_bins", excess_sum / count}},
                            {},
                            {}};
}

ValidationReport binpacking_validate(const json& raw, const std::vector<PackingInstance>& instances)
{
    if (!raw.is_array())
        return invalid_report("malformed", "expected one list of bin indices per instance");
    std::vector<PackingAssignment> assignments;
    for (const auto& row : raw) {
        if (!row.is_array())
            return invalid_report("malformed", "expected one list of bin indices per instance");
        PackingAssignment a;
        a.reserve(row.size());
        for (const auto& b : row) {
            if (!b.is_number_integer() || (!b.is_number_unsigned() && b.get<std::int64_t>() < 0))
                return invalid_report("malformed", "bin index " + b.dump() + " is not a non-negative integer");
            a.push_back(static_cast<std::size_t>(b.get<std::uint64_t>()));
        }
        assignments.push_back(std::move(a));
    }
    return binpacking_validate(assignments, instances);
}

std::vector<PackingInstance> generate_uniform_instances(std::size_t count, std::size_t n_items, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<PackingInstance> out(count);
    for (auto& inst : out) {
        inst.capacity = 150.0;
        inst.items.reserve(n_items);
        for (std::size_t i = 0; i < n_items; ++i)
            inst.items.push_back(static_cast<double>(20 + rng.below(81)));
    }
    return out;
}

std::vector<PackingInstance> generate_weibull_instances(std::size_t count, std::size_t n_items, std::uint64_t seed)
{
    constexpr double shape = 3.0;
    constexpr double scale = 45.0;
    Rng rng(seed);
    std::vector<PackingInstance> out(count);
    for (auto& inst : out) {
        inst.capacity = 100.0;
        inst.items.reserve(n_items);
        for (std::size_t i = 0; i < n_items; ++i) {
            const double u = rng.uniform01();
            const double x = scale * std::pow(-std::log1p(-u), 1.0 / shape);
            inst.items.push_back(std::clamp(std::round(x), 1.0, 100.0));
        }
    }
    return out;
}

json instances_to_json(const std::vector<PackingInstance>& instances)
{
    json arr = json::array();
    for (const auto& inst : instances)
        arr.push_back({{"capacity", inst.capacity}, {"items", inst.items}});
    return json{{"instances", arr}};
}

std::vector<PackingInstance> instances_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("instances") || !j["instances"].is_array())
        throw Error("bin-packing context needs an \"instances\" list");
    std::vector<PackingInstance> out;
    for (const auto& e : j["instances"]) {
        PackingInstance inst;
        inst.capacity = e.at("capacity").get<double>();
        inst.items = e.at("items").get<std::vector<double>>();
        check_items(inst.items, inst.capacity);
        out.push_back(std::move(inst));
    }
    return out;
}

double first_fit_mean_excess(const std::vector<PackingInstance>& instances)
{
    std::vector<PackingAssignment> assignments;
    for (const auto& inst : instances)
        assignments.push_back(first_fit(inst.items, inst.capacity));
    return binpacking_validate(assignments, instances).metrics.at("excess_fraction");
}

} // namespace evoforge::problems
