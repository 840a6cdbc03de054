#include "evoforge/problems/validators.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/problems/bin_packing.hpp"
#include "evoforge/problems/circle_packing.hpp"
#include "evoforge/problems/heilbronn.hpp"
#include "evoforge/problems/kissing.hpp"
#include "evoforge/problems/toy.hpp"

#include <algorithm>

namespace evoforge::problems {

namespace {

using json = nlohmann::json;

std::size_t size_param(const json& params, const char* key, std::size_t fallback)
{
    if (!params.contains(key))
        return fallback;
    const auto& v = params[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() > 0))
        throw ConfigError(std::string("validator parameter '") + key + "' must be a positive integer");
    return v.get<std::size_t>();
}

double real_param(const json& params, const char* key, double fallback)
{
    if (!params.contains(key))
        return fallback;
    if (!params[key].is_number())
        throw ConfigError(std::string("validator parameter '") + key + "' must be a number");
    return params[key].get<double>();
}

} // namespace

const std::vector<std::string>& builtin_validator_kinds()
{
    static const std::vector<std::string> kinds{"heilbronn", "circle_packing", "kissing", "bin_packing",
                                                "toy_quadratic"};
    return kinds;
}

void check_builtin_binding(const ValidatorBinding& binding)
{
    const auto& kinds = builtin_validator_kinds();
    if (std::find(kinds.begin(), kinds.end(), binding.builtin) == kinds.end())
        throw ConfigError("unknown builtin validator '" + binding.builtin + "'");
    if (!binding.params.is_object())
        throw ConfigError("validator params must be a mapping");
    const auto& p = binding.params;
    if (binding.builtin == "heilbronn")
        size_param(p, "n_required", 11);
    else if (binding.builtin == "circle_packing") {
        if (!p.contains("n_required"))
            throw ConfigError("circle_packing needs params.n_required");
        size_param(p, "n_required", 0);
        real_param(p, "tolerance", kCircleTolerance);
    } else if (binding.builtin == "kissing")
        size_param(p, "dimension", 1);
    else if (binding.builtin == "toy_quadratic")
        real_param(p, "target", 0.7);
}

ValidationReport run_builtin_validator(const ValidatorBinding& binding, const json& raw, const json& context)
{
    const auto& p = binding.params;
    const auto& kind = binding.builtin;
    if (kind == "heilbronn")
        return heilbronn_validate(raw, size_param(p, "n_required", 11));
    if (kind == "circle_packing")
        return circle_packing_validate(raw, size_param(p, "n_required", 0), real_param(p, "tolerance", kCircleTolerance));
    if (kind == "kissing") {
        std::optional<std::size_t> dim;
        if (p.contains("dimension"))
            dim = size_param(p, "dimension", 1);
        return kissing_validate(raw, dim);
    }
    if (kind == "bin_packing") {
        std::vector<PackingInstance> instances;
        try {
            instances = instances_from_json(context);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bin_packing context: ") + e.what());
        }
        return binpacking_validate(raw, instances);
    }
    if (kind == "toy_quadratic")
        return toy_quadratic_validate(raw, real_param(p, "target", 0.7));
    throw ConfigError("unknown builtin validator '" + kind + "'");
}

} // namespace evoforge::problems
