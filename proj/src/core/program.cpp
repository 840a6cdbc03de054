#include "evoforge/core/program.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/core/metric_schema.hpp"

namespace evoforge {

bool Program::is_valid() const
{
    auto v = metric(kIsValid);
    return v && *v == 1.0;
}

std::optional<double> Program::metric(std::string_view name) const
{
    if (!metrics)
        return std::nullopt;
    auto it = metrics->find(name);
    if (it == metrics->end())
        return std::nullopt;
    return it->second;
}

Program lifecycle_transition(Program program, LifecycleState target)
{
    if (!is_legal_transition(program.state, target)) {
        throw StateMachineError("illegal lifecycle transition " + std::string(to_string(program.state)) + " -> " +
                                std::string(to_string(target)) + " for program " + program.id.str());
    }
    program.state = target;
    return program;
}

void check_program_invariants(const Program& program)
{
    if (program.parent_ids.empty() != (program.generation == 0))
        throw Error("program " + program.id.str() + ": parent_ids must be empty iff generation is 0");
    if (program.metrics) {
        auto it = program.metrics->find(kIsValid);
        if (it == program.metrics->end())
            throw Error("program " + program.id.str() + ": metrics lack is_valid");
        if (it->second != 0.0 && it->second != 1.0)
            throw Error("program " + program.id.str() + ": is_valid must be 0 or 1");
    }
}

void to_json(nlohmann::json& j, const Program& p)
{
    j = nlohmann::json{
        {"id", p.id.str()},
        {"source", p.source},
        {"state", std::string(to_string(p.state))},
        {"metrics", p.metrics ? nlohmann::json(*p.metrics) : nlohmann::json(nullptr)},
        {"parent_ids", p.parent_ids},
        {"generation", p.generation},
        {"stage_outputs", p.stage_outputs},
        {"version", p.version},
        {"created_at", p.created_at},
    };
}

void from_json(const nlohmann::json& j, Program& p)
{
    p.id = Uuid::parse(j.at("id").get<std::string>());
    p.source = j.at("source").get<std::string>();
    p.state = lifecycle_from_string(j.at("state").get<std::string>());
    const auto& metrics = j.at("metrics");
    if (metrics.is_null()) {
        p.metrics.reset();
    } else {
        Metrics m;
        for (const auto& [name, value] : metrics.items())
            m.emplace(name, value.get<double>());
        p.metrics = std::move(m);
    }
    p.parent_ids = j.at("parent_ids").get<std::vector<ProgramId>>();
    p.generation = j.at("generation").get<std::uint32_t>();
    p.stage_outputs = j.value("stage_outputs", nlohmann::json::object());
    p.version = j.value("version", std::uint64_t{0});
    p.created_at = j.value("created_at", std::int64_t{0});
}

} // namespace evoforge
