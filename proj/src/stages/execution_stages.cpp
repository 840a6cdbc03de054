#include "builtin_stages.hpp"

#include "evoforge/core/digest.hpp"
#include "evoforge/core/error.hpp"
#include "evoforge/stages/context.hpp"
#include "evoforge/stages/insights.hpp"
#include "evoforge/stages/lineage.hpp"
#include "evoforge/stages/metrics.hpp"
#include "evoforge/stages/templates.hpp"

#include <spdlog/spdlog.h>

namespace evoforge::stages::builtin {

using json = nlohmann::json;
using dag::StageContext;
using dag::StageFailure;

namespace {

/// StageFailure for a non-value execution outcome.
[[noreturn]] void fail_with(const sandbox::ExecutionOutcome& outcome, const sandbox::ResourceLimits& limits)
{
    if (const auto* e = std::get_if<sandbox::CandidateError>(&outcome)) {
        std::string message = e->type == "MissingEntrypoint" ? e->message : e->type + ": " + e->message;
        throw StageFailure(message, e->traceback);
    }
    if (std::holds_alternative<sandbox::Timeout>(outcome))
        throw StageFailure("Timeout: exceeded wall-clock limit of " + std::to_string(limits.wall_timeout.count()) +
                           " ms");
    throw StageFailure(sandbox::describe(outcome));
}

const json& problem_context(const StageContext& ctx, const StageServices& services)
{
    auto it = ctx.inputs.find(kProblemContextInput);
    return it != ctx.inputs.end() ? *it->second : services.problem->context_data;
}

/// First data input that is not the problem context.
const json& upstream(const StageContext& ctx, const dag::StageSpec& spec)
{
    for (const auto& name : spec.data_inputs)
        if (name != kProblemContextInput)
            return ctx.input(name);
    throw Error("stage '" + spec.name + "' has no upstream data input");
}

const json& metrics_object(const json& value)
{
    return value.is_object() && value.contains("metrics") ? value["metrics"] : value;
}

std::string route_digest(const StageServices& s, mutation::StageKind kind)
{
    std::string material;
    if (s.router)
        for (const auto& c : s.router->clients())
            if (c->route().stage_kind == kind) {
                const auto& r = c->route();
                material += r.model_id + "|" + r.endpoint + "|" + std::to_string(r.temperature) + "|" +
                            std::to_string(r.max_tokens) + "|" + std::to_string(r.weight) + ";";
            }
    return material;
}

/// Error trace assembled from optional upstream outcomes: errored stages
/// first, then validator rejections.
std::optional<std::string> collect_error_trace(const StageContext& ctx)
{
    std::string trace;
    for (const auto& [name, outcome] : ctx.optional) {
        if (const auto* e = std::get_if<dag::Errored>(outcome)) {
            if (!trace.empty())
                trace += "\n";
            trace += name + ": " + e->message;
            if (!e->trace.empty())
                trace += "\n" + e->trace;
        }
    }
    if (!trace.empty())
        return trace;
    for (const auto& [name, outcome] : ctx.optional) {
        if (const auto* d = std::get_if<dag::Done>(outcome)) {
            const auto& v = d->value;
            if (v.is_object() && v.contains("reason") && v["reason"].is_string() &&
                !v["reason"].get<std::string>().empty())
                return name + ": output rejected (" + v["reason"].get<std::string>() +
                       "): " + v.value("detail", std::string());
        }
    }
    return std::nullopt;
}

std::size_t param_size(const dag::StageSpec& spec, const char* key, std::size_t fallback)
{
    if (!spec.params.contains(key))
        return fallback;
    const auto& v = spec.params[key];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw ConfigError("stage '" + spec.name + "': param '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string param_string(const dag::StageSpec& spec, const char* key, std::string fallback)
{
    if (!spec.params.contains(key))
        return fallback;
    if (!spec.params[key].is_string())
        throw ConfigError("stage '" + spec.name + "': param '" + key + "' must be a string");
    return spec.params[key].get<std::string>();
}

class ServiceStage : public dag::Stage {
public:
    ServiceStage(dag::StageSpec spec, Services services) : spec_(std::move(spec)), services_(std::move(services))
    {
        if (!services_ || !services_->problem)
            throw ConfigError("stage '" + spec_.name + "' needs a problem context");
    }

protected:
    const StageServices& svc() const { return *services_; }
    const problems::ProblemContext& problem() const { return *services_->problem; }
    store::ProgramStore& store() const
    {
        if (!services_->store)
            throw ConfigError("stage '" + spec_.name + "' needs a program store");
        return *services_->store;
    }
    sandbox::Executor& executor() const
    {
        if (!services_->executor)
            throw ConfigError("stage '" + spec_.name + "' needs an executor");
        return *services_->executor;
    }

    dag::StageSpec spec_;
    Services services_;
};

class ValidateCode final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;
    json run(const StageContext& ctx) override
    {
        auto r = executor().execute(ctx.program.source, sandbox::ExecMode::ParseOnly, nullptr, svc().limits);
        if (!r.ok())
            fail_with(r.outcome, svc().limits);
        return json{{"ok", true}};
    }
};

class CallProgram final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;
    json run(const StageContext& ctx) override
    {
        auto r = executor().execute(ctx.program.source, sandbox::ExecMode::Run, problem_context(ctx, svc()),
                                    svc().limits);
        if (!r.ok())
            fail_with(r.outcome, svc().limits);
        return r.value();
    }
};

class CallValidator final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;
    json run(const StageContext& ctx) override
    {
        const json& raw = upstream(ctx, spec_);
        const json& context = problem_context(ctx, svc());
        const auto& binding = problem().validator;
        if (binding.is_builtin()) {
            auto report = problems::run_builtin_validator(binding, raw, context);
            return json{{"metrics", report.metrics}, {"reason", report.reason}, {"detail", report.detail}};
        }
        auto r = executor().execute(binding.external_source, sandbox::ExecMode::Run,
                                    json{{"output", raw}, {"context", context}}, svc().limits, "validate");
        if (!r.ok())
            fail_with(r.outcome, svc().limits);
        try {
            return json{{"metrics", metrics_from_json(r.value())}, {"reason", ""}, {"detail", ""}};
        } catch (const Error& e) {
            throw StageFailure(std::string("validator returned malformed metrics: ") + e.what());
        }
    }
};

class ComputeComplexity final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;
    json run(const StageContext& ctx) override { return stages::compute_complexity(ctx.program.source); }
};

class MergeMetrics final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;
    json run(const StageContext& ctx) override
    {
        Metrics merged;
        auto absorb = [&](const json& value) {
            for (auto& [k, v] : metrics_from_json(metrics_object(value)))
                merged[k] = v;
        };
        try {
            for (const auto& name : spec_.data_inputs)
                if (name != kProblemContextInput)
                    absorb(ctx.input(name));
            for (const auto& name : spec_.optional_inputs)
                if (const auto* d = std::get_if<dag::Done>(ctx.optional_outcome(name)))
                    absorb(d->value);
        } catch (const Error& e) {
            throw StageFailure(e.what());
        }
        return merged;
    }
};

class EnsureMetrics final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;
    json run(const StageContext& ctx) override
    {
        Metrics merged;
        try {
            merged = metrics_from_json(metrics_object(upstream(ctx, spec_)));
        } catch (const Error& e) {
            throw StageFailure(e.what());
        }
        return merge_and_ensure_metrics(merged, {}, problem().schemas);
    }
};

class Insights final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;

    json run(const StageContext& ctx) override
    {
        if (!svc().router || !svc().router->has_route(mutation::StageKind::Insights))
            return json::array();
        const Metrics metrics = metrics_from_json(upstream(ctx, spec_));
        InsightRequest req{problem(), ctx.program, metrics, collect_error_trace(ctx),
                           param_size(spec_, "max_insights", svc().max_insights)};
        auto rng = derive_rng(svc().seed, ctx.program.id, spec_.name);
        return stages::generate_insights(req, *svc().router, rng);
    }

    std::string config_digest() const override
    {
        auto it = problem().prompt_templates.find("insights");
        std::string tmpl(it != problem().prompt_templates.end() ? it->second : default_insights_template());
        return sha256_hex(tmpl + route_digest(svc(), mutation::StageKind::Insights) +
                          std::to_string(svc().max_insights) + problem().task_description);
    }
};

class Lineage final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;

    json run(const StageContext& ctx) override
    {
        Program child = ctx.program;
        child.metrics = metrics_from_json(upstream(ctx, spec_));
        json out = json::array();
        mutation::ModelRouter* router =
            svc().router && svc().router->has_route(mutation::StageKind::Lineage) ? svc().router.get() : nullptr;
        for (const auto& pid : child.parent_ids) {
            auto parent = store().get_program(pid);
            if (!parent || !parent->metrics)
                continue;
            auto rng = derive_rng(svc().seed, child.id, spec_.name + "/" + pid.str());
            out.push_back(stages::lineage_transition(problem(), *parent, child, router, rng, svc().lineage.raw_delta));
        }
        return out;
    }

    std::string config_digest() const override
    {
        auto it = problem().prompt_templates.find("lineage");
        std::string tmpl(it != problem().prompt_templates.end() ? it->second : default_lineage_template());
        return sha256_hex(tmpl + route_digest(svc(), mutation::StageKind::Lineage) +
                          (svc().lineage.raw_delta ? "raw" : "directed") + problem().task_description);
    }
};

class RelativeIds final : public ServiceStage {
public:
    RelativeIds(dag::StageSpec spec, Services services, RelativeDirection direction)
        : ServiceStage(std::move(spec), std::move(services)), direction_(direction)
    {
        const auto& opts = svc().lineage;
        strategy_ = relative_strategy_from_string(param_string(spec_, "strategy", std::string(to_string(opts.strategy))));
        k_ = param_size(spec_, "k", opts.k);
        depth_ = param_size(spec_, "depth", direction_ == RelativeDirection::Ancestors ? opts.ancestor_depth
                                                                                       : opts.descendant_depth);
    }

    json run(const StageContext& ctx) override
    {
        json out = json::array();
        for (const auto& id :
             select_relatives(ctx.program, direction_, strategy_, k_, store(), problem().primary(), depth_))
            out.push_back(id.str());
        return out;
    }

    bool cacheable() const override { return false; }

private:
    RelativeDirection direction_;
    RelativeStrategy strategy_ = RelativeStrategy::TopFitness;
    std::size_t k_ = 3;
    std::size_t depth_ = 5;
};

/// Stored lineage analyses of another program, empty when it has none.
std::vector<mutation::LineageAnalysis> stored_analyses(const Program& p, const std::string& lineage_stage)
{
    if (!p.stage_outputs.is_object() || !p.stage_outputs.contains(lineage_stage))
        return {};
    const auto& entry = p.stage_outputs[lineage_stage];
    if (!entry.is_object() || entry.value("status", "") != "done" || !entry.contains("value"))
        return {};
    return entry["value"].get<std::vector<mutation::LineageAnalysis>>();
}

class LineagesFromAncestors final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;

    json run(const StageContext& ctx) override
    {
        const auto lineage_stage = param_string(spec_, "lineage_stage", "lineage");
        const auto ids_stage = param_string(spec_, "ids_stage", "ancestor_ids");
        std::vector<mutation::LineageAnalysis> out;
        if (auto it = ctx.inputs.find(lineage_stage); it != ctx.inputs.end())
            out = it->second->get<std::vector<mutation::LineageAnalysis>>();
        for (const auto& id : ctx.input(ids_stage)) {
            auto ancestor = store().get_program(Uuid::parse(id.get<std::string>()));
            if (!ancestor)
                continue;
            for (auto& a : stored_analyses(*ancestor, lineage_stage))
                out.push_back(std::move(a));
        }
        return out;
    }

    bool cacheable() const override { return false; }
};

class LineagesToDescendants final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;

    json run(const StageContext& ctx) override
    {
        const auto lineage_stage = param_string(spec_, "lineage_stage", "lineage");
        const auto ids_stage = param_string(spec_, "ids_stage", "descendant_ids");
        std::vector<mutation::LineageAnalysis> out;
        for (const auto& id : ctx.input(ids_stage)) {
            auto child = store().get_program(Uuid::parse(id.get<std::string>()));
            if (!child)
                continue;
            for (auto& a : stored_analyses(*child, lineage_stage))
                if (a.parent_id == ctx.program.id)
                    out.push_back(std::move(a));
        }
        return out;
    }

    bool cacheable() const override { return false; }
};

class MutationContextStage final : public ServiceStage {
public:
    using ServiceStage::ServiceStage;

    json run(const StageContext& ctx) override
    {
        auto lookup = [&](const char* key, const char* fallback) -> const json* {
            auto it = ctx.inputs.find(param_string(spec_, key, fallback));
            return it == ctx.inputs.end() ? nullptr : it->second;
        };
        const json* metrics = lookup("metrics", "ensure_metrics");
        if (!metrics)
            throw StageFailure("mutation context needs ensured metrics");
        auto list = [](const json* j, auto tag) {
            using T = typename decltype(tag)::type;
            return j ? j->get<std::vector<T>>() : std::vector<T>{};
        };
        struct InsightTag {
            using type = mutation::Insight;
        };
        struct AnalysisTag {
            using type = mutation::LineageAnalysis;
        };
        return assemble_mutation_context(ctx.program, metrics_from_json(*metrics),
                                         list(lookup("insights", "insights"), InsightTag{}),
                                         list(lookup("from_ancestors", "lineages_from_ancestors"), AnalysisTag{}),
                                         list(lookup("to_descendants", "lineages_to_descendants"), AnalysisTag{}),
                                         collect_error_trace(ctx), svc().caps);
    }
};

} // namespace

StagePtr validate_code(const dag::StageSpec& spec, Services s) { return std::make_shared<ValidateCode>(spec, s); }
StagePtr call_program(const dag::StageSpec& spec, Services s) { return std::make_shared<CallProgram>(spec, s); }
StagePtr call_validator(const dag::StageSpec& spec, Services s) { return std::make_shared<CallValidator>(spec, s); }
StagePtr compute_complexity(const dag::StageSpec& spec, Services s)
{
    return std::make_shared<ComputeComplexity>(spec, s);
}
StagePtr merge_metrics(const dag::StageSpec& spec, Services s) { return std::make_shared<MergeMetrics>(spec, s); }
StagePtr ensure_metrics(const dag::StageSpec& spec, Services s) { return std::make_shared<EnsureMetrics>(spec, s); }
StagePtr insights(const dag::StageSpec& spec, Services s) { return std::make_shared<Insights>(spec, s); }
StagePtr lineage(const dag::StageSpec& spec, Services s) { return std::make_shared<Lineage>(spec, s); }
StagePtr ancestor_ids(const dag::StageSpec& spec, Services s)
{
    return std::make_shared<RelativeIds>(spec, s, RelativeDirection::Ancestors);
}
StagePtr descendant_ids(const dag::StageSpec& spec, Services s)
{
    return std::make_shared<RelativeIds>(spec, s, RelativeDirection::Descendants);
}
StagePtr lineages_from_ancestors(const dag::StageSpec& spec, Services s)
{
    return std::make_shared<LineagesFromAncestors>(spec, s);
}
StagePtr lineages_to_descendants(const dag::StageSpec& spec, Services s)
{
    return std::make_shared<LineagesToDescendants>(spec, s);
}
StagePtr mutation_context(const dag::StageSpec& spec, Services s)
{
    return std::make_shared<MutationContextStage>(spec, s);
}

} // namespace evoforge::stages::builtin
