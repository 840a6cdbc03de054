#pragma once

#include "evoforge/dag/stage.hpp"
#include "evoforge/dag/stage_dag.hpp"
#include "evoforge/stages/services.hpp"

#include <memory>

namespace evoforge::stages::builtin {

using Services = std::shared_ptr<const StageServices>;
using StagePtr = std::shared_ptr<dag::Stage>;

StagePtr validate_code(const dag::StageSpec& spec, Services services);
StagePtr call_program(const dag::StageSpec& spec, Services services);
StagePtr call_validator(const dag::StageSpec& spec, Services services);
StagePtr compute_complexity(const dag::StageSpec& spec, Services services);
StagePtr merge_metrics(const dag::StageSpec& spec, Services services);
StagePtr ensure_metrics(const dag::StageSpec& spec, Services services);
StagePtr insights(const dag::StageSpec& spec, Services services);
StagePtr lineage(const dag::StageSpec& spec, Services services);
StagePtr ancestor_ids(const dag::StageSpec& spec, Services services);
StagePtr descendant_ids(const dag::StageSpec& spec, Services services);
StagePtr lineages_from_ancestors(const dag::StageSpec& spec, Services services);
StagePtr lineages_to_descendants(const dag::StageSpec& spec, Services services);
StagePtr mutation_context(const dag::StageSpec& spec, Services services);

} // namespace evoforge::stages::builtin
