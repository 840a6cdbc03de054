#include "evoforge/stages/services.hpp"

#include "evoforge/core/digest.hpp"
#include "evoforge/core/error.hpp"

namespace evoforge::stages {

RelativeStrategy relative_strategy_from_string(std::string_view s)
{
    if (s == "top_fitness")
        return RelativeStrategy::TopFitness;
    if (s == "most_recent")
        return RelativeStrategy::MostRecent;
    throw ConfigError("unknown relative selection strategy '" + std::string(s) +
                      "' (expected top_fitness or most_recent)");
}

std::string_view to_string(RelativeStrategy s)
{
    return s == RelativeStrategy::TopFitness ? "top_fitness" : "most_recent";
}

Rng derive_rng(std::uint64_t seed, const ProgramId& id, std::string_view purpose)
{
    const auto hex = sha256_hex(std::to_string(seed) + "/" + id.str() + "/" + std::string(purpose));
    return Rng(std::stoull(hex.substr(0, 16), nullptr, 16));
}

} // namespace evoforge::stages
