#pragma once

#include "evoforge/dag/engine.hpp"
#include "evoforge/stages/services.hpp"

#include <functional>

namespace evoforge::stages {

using StageFactory =
    std::function<std::shared_ptr<dag::Stage>(const dag::StageSpec&, std::shared_ptr<const StageServices>)>;

/// Maps stage kinds to implementations.
class StageRegistry {
public:
    /// validate_code, call_program, call_validator, compute_complexity,
    /// merge_metrics, ensure_metrics, insights, lineage, ancestor_ids,
    /// descendant_ids, lineages_from_ancestors, lineages_to_descendants,
    /// mutation_context
    static StageRegistry with_builtins();

    void add(std::string kind, StageFactory factory);
    bool has(std::string_view kind) const;
    std::vector<std::string> kinds() const;

    /// One instance per stage of `dag`. Throws ConfigError for unknown kinds.
    dag::StageMap build(const dag::StageDAG& dag, std::shared_ptr<const StageServices> services) const;

private:
    std::map<std::string, StageFactory, std::less<>> factories_;
};

/// The standard evaluation pipeline, from code validation to mutation
/// context assembly.
dag::StageDAG default_pipeline();

} // namespace evoforge::stages
