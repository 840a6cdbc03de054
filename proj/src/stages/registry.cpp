#include "evoforge/stages/registry.hpp"

#include "builtin_stages.hpp"
#include "evoforge/core/error.hpp"

namespace evoforge::stages {

StageRegistry StageRegistry::with_builtins()
{
    StageRegistry r;
    r.add("validate_code", builtin::validate_code);
    r.add("call_program", builtin::call_program);
    r.add("call_validator", builtin::call_validator);
    r.add("compute_complexity", builtin::compute_complexity);
    r.add("merge_metrics", builtin::merge_metrics);
    r.add("ensure_metrics", builtin::ensure_metrics);
    r.add("insights", builtin::insights);
    r.add("lineage", builtin::lineage);
    r.add("ancestor_ids", builtin::ancestor_ids);
    r.add("descendant_ids", builtin::descendant_ids);
    r.add("lineages_from_ancestors", builtin::lineages_from_ancestors);
    r.add("lineages_to_descendants", builtin::lineages_to_descendants);
    r.add("mutation_context", builtin::mutation_context);
    return r;
}

void StageRegistry::add(std::string kind, StageFactory factory)
{
    if (!factory)
        throw ConfigError("stage kind '" + kind + "' registered without a factory");
    factories_[std::move(kind)] = std::move(factory);
}

bool StageRegistry::has(std::string_view kind) const
{
    return factories_.find(kind) != factories_.end();
}

std::vector<std::string> StageRegistry::kinds() const
{
    std::vector<std::string> out;
    for (const auto& [k, _] : factories_)
        out.push_back(k);
    return out;
}

dag::StageMap StageRegistry::build(const dag::StageDAG& dag, std::shared_ptr<const StageServices> services) const
{
    dag::StageMap out;
    for (const auto& spec : dag.stages) {
        auto it = factories_.find(spec.kind);
        if (it == factories_.end())
            throw ConfigError("stage '" + spec.name + "' has unknown kind '" + spec.kind + "'");
        out[spec.name] = it->second(spec, services);
    }
    return out;
}

dag::StageDAG default_pipeline()
{
    using dag::Precondition;
    using dag::StageSpec;
    const std::string ctx(kProblemContextInput);
    auto spec = [](std::string name, std::vector<std::string> data, std::vector<std::string> optional = {},
                   std::vector<std::string> after = {}) {
        StageSpec s;
        s.kind = name;
        s.name = std::move(name);
        s.data_inputs = std::move(data);
        s.optional_inputs = std::move(optional);
        s.order_after = std::move(after);
        return s;
    };
    const std::vector<std::string> diagnostics = {"validate_code", "call_program", "call_validator"};

    dag::StageDAG d;
    d.external_inputs = {ctx};
    d.stages.push_back(spec("validate_code", {}));
    auto call = spec("call_program", {"validate_code", ctx});
    call.precondition = Precondition{Precondition::Kind::Compare, "validate_code", "ok", "==", true};
    d.stages.push_back(call);
    d.stages.push_back(spec("call_validator", {"call_program", ctx}));
    d.stages.push_back(spec("compute_complexity", {}));
    d.stages.push_back(spec("merge_metrics", {"compute_complexity"}, {"call_validator"}));
    d.stages.push_back(spec("ensure_metrics", {"merge_metrics"}));
    d.stages.push_back(spec("insights", {"ensure_metrics"}, diagnostics));
    d.stages.push_back(spec("lineage", {"ensure_metrics"}));
    d.stages.push_back(spec("ancestor_ids", {}, {}, {"ensure_metrics"}));
    d.stages.push_back(spec("descendant_ids", {}, {}, {"ensure_metrics"}));
    d.stages.push_back(spec("lineages_from_ancestors", {"ancestor_ids", "lineage"}));
    d.stages.push_back(spec("lineages_to_descendants", {"descendant_ids"}, {}, {"lineage"}));
    d.stages.push_back(spec("mutation_context",
                            {"ensure_metrics", "insights", "lineages_from_ancestors", "lineages_to_descendants"},
                            diagnostics));
    return d;
}

} // namespace evoforge::stages
