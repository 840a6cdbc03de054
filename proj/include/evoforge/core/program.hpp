#pragma once

#include "evoforge/core/lifecycle.hpp"
#include "evoforge/core/uuid.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evoforge {

using Metrics = std::map<std::string, double, std::less<>>;

/// The evolutionary unit.
///
/// `version` is owned by the program store: callers read it back from a
/// WriteReceipt and pass it as the expected version on the next write.
/// `created_at` is microseconds on the run clock (wall clock or a logical
/// counter in reproducible runs).
struct Program {
    ProgramId id;
    std::string source;
    LifecycleState state = LifecycleState::Fresh;
    std::optional<Metrics> metrics;
    std::vector<ProgramId> parent_ids;
    std::uint32_t generation = 0;
    nlohmann::json stage_outputs = nlohmann::json::object();
    std::uint64_t version = 0;
    std::int64_t created_at = 0;

    bool is_seed() const { return parent_ids.empty(); }

    /// is_valid metric as a boolean; false when unevaluated.
    bool is_valid() const;

    /// Metric lookup, nullopt when unevaluated or absent.
    std::optional<double> metric(std::string_view name) const;
};

/// Returns a copy of `program` with `state = target`. Throws
/// StateMachineError when the transition is illegal.
Program lifecycle_transition(Program program, LifecycleState target);

/// Structural invariants: parent_ids empty iff generation 0, metrics contain
/// is_valid in {0, 1}. Throws evoforge::Error.
void check_program_invariants(const Program& program);

void to_json(nlohmann::json& j, const Program& p);
void from_json(const nlohmann::json& j, Program& p);

} // namespace evoforge

namespace nlohmann {
template <>
struct adl_serializer<evoforge::Uuid> {
    static void to_json(json& j, const evoforge::Uuid& id) { j = id.str(); }
    static void from_json(const json& j, evoforge::Uuid& id) { id = evoforge::Uuid::parse(j.get<std::string>()); }
};
} // namespace nlohmann
