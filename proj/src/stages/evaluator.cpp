#include "evoforge/stages/evaluator.hpp"

#include "evoforge/core/error.hpp"

#include <spdlog/spdlog.h>

namespace evoforge::stages {

using json = nlohmann::json;

ProgramEvaluator::ProgramEvaluator(std::shared_ptr<dag::DagEngine> engine,
                                   std::shared_ptr<const StageServices> services, std::string metrics_stage,
                                   std::string context_stage)
    : engine_(std::move(engine)), services_(std::move(services)), metrics_stage_(std::move(metrics_stage)),
      context_stage_(std::move(context_stage))
{
    if (!engine_ || !services_ || !services_->store || !services_->problem)
        throw ConfigError("evaluator needs an engine, a store and a problem");
    if (!engine_->dag().find(metrics_stage_))
        throw ConfigError("metrics stage '" + metrics_stage_ + "' is not in the DAG");
}

json ProgramEvaluator::externals() const
{
    return json{{std::string(kProblemContextInput), services_->problem->context_data}};
}

dag::Finalizer ProgramEvaluator::completion_finalizer() const
{
    return [metrics_stage = metrics_stage_](Program& p, const dag::OutcomeMap& outcomes) {
        if (p.state != LifecycleState::Running)
            return;
        auto it = outcomes.find(metrics_stage);
        const auto* done = it == outcomes.end() ? nullptr : std::get_if<dag::Done>(&it->second);
        if (!done) {
            p = lifecycle_transition(std::move(p), LifecycleState::Failed);
            return;
        }
        p.metrics = done->value.get<Metrics>();
        p = lifecycle_transition(std::move(p), LifecycleState::Complete);
    };
}

EvaluationSummary ProgramEvaluator::evaluate(const ProgramId& id)
{
    auto results = evaluate_batch({id});
    return results.front();
}

std::vector<EvaluationSummary> ProgramEvaluator::evaluate_batch(const std::vector<ProgramId>& ids)
{
    auto& store = *services_->store;
    std::vector<EvaluationSummary> summaries(ids.size());
    std::vector<Program> running;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        summaries[i].id = ids[i];
        auto current = store.get_required(ids[i]);
        summaries[i].final_state = current.state;
        if (current.state != LifecycleState::Fresh)
            continue;
        bool claimed = false;
        auto written = store::update_program(store, ids[i], [&](Program& p) {
            claimed = p.state == LifecycleState::Fresh;
            if (claimed)
                p = lifecycle_transition(std::move(p), LifecycleState::Running);
        });
        summaries[i].final_state = written.state;
        if (!claimed)
            continue;
        running.push_back(std::move(written));
        slots.push_back(i);
    }
    if (running.empty())
        return summaries;

    auto records = engine_->run_batch(running, externals(), true, completion_finalizer());
    for (std::size_t j = 0; j < records.size(); ++j) {
        auto& s = summaries[slots[j]];
        s.executed = records[j].executed;
        s.cache_hits = records[j].cache_hits;
        s.final_state = store.get_required(s.id).state;
        spdlog::debug("evaluated {} -> {}", s.id.str(), to_string(s.final_state));
    }
    return summaries;
}

std::optional<mutation::MutationContext> ProgramEvaluator::refresh_context(const ProgramId& id)
{
    auto program = services_->store->get_required(id);
    if (!program.metrics)
        return std::nullopt;
    auto record = engine_->cached_run(program, externals());
    auto it = record.outcomes.find(context_stage_);
    if (it == record.outcomes.end())
        return std::nullopt;
    const auto* done = std::get_if<dag::Done>(&it->second);
    if (!done)
        return std::nullopt;
    return done->value.get<mutation::MutationContext>();
}

} // namespace evoforge::stages
