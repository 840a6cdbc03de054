#pragma once

#include "evoforge/dag/engine.hpp"
#include "evoforge/mutation/context.hpp"
#include "evoforge/stages/services.hpp"

namespace evoforge::stages {

struct EvaluationSummary {
    ProgramId id;
    LifecycleState final_state = LifecycleState::Fresh;
    std::size_t executed = 0;
    std::size_t cache_hits = 0;
};

/// Drives programs through the DAG: FRESH -> RUNNING -> COMPLETE, or FAILED
/// when the metrics stage did not finish Done.
class ProgramEvaluator {
public:
    ProgramEvaluator(std::shared_ptr<dag::DagEngine> engine, std::shared_ptr<const StageServices> services,
                     std::string metrics_stage = "ensure_metrics", std::string context_stage = "mutation_context");

    EvaluationSummary evaluate(const ProgramId& id);

    /// Evaluates every FRESH program among `ids` (others are ignored), at
    /// most max_programs concurrently. Summaries follow input order.
    std::vector<EvaluationSummary> evaluate_batch(const std::vector<ProgramId>& ids);

    /// Re-runs the DAG with caching on an evaluated program (no state
    /// change) and returns the assembled context. Stages that read live
    /// store state pick up descendants evaluated since.
    std::optional<mutation::MutationContext> refresh_context(const ProgramId& id);

    const dag::DagEngine& engine() const { return *engine_; }
    nlohmann::json externals() const;

private:
    dag::Finalizer completion_finalizer() const;

    std::shared_ptr<dag::DagEngine> engine_;
    std::shared_ptr<const StageServices> services_;
    std::string metrics_stage_;
    std::string context_stage_;
};

} // namespace evoforge::stages
