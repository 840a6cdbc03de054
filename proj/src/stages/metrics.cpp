#include "evoforge/stages/metrics.hpp"

#include "evoforge/core/error.hpp"

#include <cmath>

namespace evoforge::stages {

Metrics compute_complexity(std::string_view source)
{
    double loc = 0;
    std::size_t pos = 0;
    while (pos < source.size()) {
        auto nl = source.find('\n', pos);
        auto line = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        auto first = line.find_first_not_of(" \t\r\f\v");
        if (first != std::string_view::npos && line[first] != '#')
            ++loc;
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }
    double chars = 0;
    for (unsigned char c : source)
        if ((c & 0xC0) != 0x80)
            ++chars;
    return Metrics{{"loc", loc}, {"chars", chars}};
}

Metrics metrics_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error("metrics must be a mapping of names to numbers, got " + j.dump());
    Metrics out;
    for (const auto& [name, value] : j.items()) {
        if (value.is_boolean())
            out[name] = value.get<bool>() ? 1.0 : 0.0;
        else if (value.is_number())
            out[name] = value.get<double>();
        else
            throw Error("metric '" + name + "' is not numeric: " + value.dump());
    }
    return out;
}

Metrics merge_and_ensure_metrics(const std::optional<Metrics>& validator, const Metrics& complexity,
                                 std::span<const MetricSchema> schemas)
{
    Metrics merged = complexity;
    if (validator)
        for (const auto& [name, value] : *validator)
            merged[name] = value;

    const auto& primary = primary_schema(schemas);
    auto p = merged.find(primary.name);
    const bool primary_missing = p == merged.end() || !std::isfinite(p->second);

    for (const auto& s : schemas) {
        auto it = merged.find(s.name);
        if (it == merged.end() || !std::isfinite(it->second))
            merged[s.name] = worst_value(s);
    }
    auto& valid = merged[std::string(kIsValid)];
    auto v = validator ? validator->find(kIsValid) : Metrics::const_iterator{};
    const bool declared_valid = validator && v != validator->end() && std::isfinite(v->second) && v->second == 1.0;
    valid = (declared_valid && !primary_missing) ? 1.0 : 0.0;
    return merged;
}

} // namespace evoforge::stages
