#include "evoforge/dag/stage_dag.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace evoforge::dag {

using json = nlohmann::json;

namespace {

std::vector<std::string> predecessors(const StageSpec& s)
{
    std::vector<std::string> out = s.data_inputs;
    out.insert(out.end(), s.optional_inputs.begin(), s.optional_inputs.end());
    out.insert(out.end(), s.order_after.begin(), s.order_after.end());
    return out;
}

std::vector<std::string> string_list(const json& j, const char* key)
{
    if (!j.contains(key))
        return {};
    if (!j[key].is_array())
        throw ConfigError(std::string("stage field '") + key + "' must be a list");
    return j[key].get<std::vector<std::string>>();
}

} // namespace

const StageSpec* StageDAG::find(std::string_view name) const
{
    for (const auto& s : stages)
        if (s.name == name)
            return &s;
    return nullptr;
}

std::vector<DagIssue> validate_dag(const StageDAG& dag)
{
    std::vector<DagIssue> issues;
    if (dag.stages.empty())
        issues.push_back({"empty", "DAG has no stages", {}});

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < dag.stages.size(); ++i) {
        const auto& name = dag.stages[i].name;
        if (name.empty())
            issues.push_back({"duplicate", "stage " + std::to_string(i) + " has no name", {}});
        else if (!index.emplace(name, i).second)
            issues.push_back({"duplicate", "duplicate stage name '" + name + "'", {name}});
    }
    std::set<std::string> externals(dag.external_inputs.begin(), dag.external_inputs.end());
    for (const auto& e : dag.external_inputs)
        if (index.count(e))
            issues.push_back({"duplicate", "external input '" + e + "' shadows a stage", {e}});

    for (const auto& s : dag.stages) {
        for (const auto& in : s.data_inputs)
            if (!index.count(in) && !externals.count(in))
                issues.push_back({"dangling", "stage '" + s.name + "' reads from undeclared '" + in + "'", {s.name, in}});
        for (const auto& in : s.optional_inputs)
            if (!index.count(in))
                issues.push_back({"dangling", "stage '" + s.name + "' optionally reads undeclared '" + in + "'",
                                  {s.name, in}});
        for (const auto& in : s.order_after)
            if (!index.count(in))
                issues.push_back({"dangling", "stage '" + s.name + "' is ordered after undeclared '" + in + "'",
                                  {s.name, in}});
    }

    // Cycle detection by DFS colouring; report each cycle's members.
    std::map<std::string, int> colour;
    std::vector<std::string> path;
    std::set<std::set<std::string>> reported;
    std::function<void(const std::string&)> visit = [&](const std::string& name) {
        colour[name] = 1;
        path.push_back(name);
        for (const auto& p : predecessors(dag.stages[index[name]])) {
            if (!index.count(p))
                continue;
            if (colour[p] == 1) {
                auto start = std::find(path.begin(), path.end(), p);
                std::vector<std::string> cycle(start, path.end());
                std::set<std::string> key(cycle.begin(), cycle.end());
                if (reported.insert(key).second) {
                    std::sort(cycle.begin(), cycle.end());
                    std::string msg = "cycle through";
                    for (const auto& c : cycle)
                        msg += " " + c;
                    issues.push_back({"cycle", msg, cycle});
                }
            } else if (colour[p] == 0) {
                visit(p);
            }
        }
        path.pop_back();
        colour[name] = 2;
    };
    for (const auto& [name, _] : index)
        if (colour[name] == 0)
            visit(name);

    bool acyclic = std::none_of(issues.begin(), issues.end(), [](const DagIssue& i) { return i.kind == "cycle"; });
    if (acyclic) {
        // A guard may only inspect stages guaranteed to have finished.
        std::function<bool(const std::string&, const std::string&)> reaches = [&](const std::string& from,
                                                                                  const std::string& target) {
            auto it = index.find(from);
            if (it == index.end())
                return false;
            for (const auto& p : predecessors(dag.stages[it->second]))
                if (p == target || reaches(p, target))
                    return true;
            return false;
        };
        for (const auto& s : dag.stages) {
            const auto& pc = s.precondition;
            if (pc.kind != Precondition::Kind::Exists && pc.kind != Precondition::Kind::Compare)
                continue;
            if (!index.count(pc.stage))
                issues.push_back({"dangling", "precondition of '" + s.name + "' names undeclared '" + pc.stage + "'",
                                  {s.name, pc.stage}});
            else if (!reaches(s.name, pc.stage))
                issues.push_back({"precondition",
                                  "precondition of '" + s.name + "' reads '" + pc.stage + "', which is not upstream",
                                  {s.name, pc.stage}});
        }
    }
    return issues;
}

void require_valid(const StageDAG& dag)
{
    auto issues = validate_dag(dag);
    if (issues.empty())
        return;
    std::string msg = "invalid DAG:";
    for (const auto& i : issues)
        msg += "\n  " + i.kind + ": " + i.message;
    throw ConfigError(msg);
}

std::vector<std::string> topological_order(const StageDAG& dag)
{
    require_valid(dag);
    std::vector<std::string> order;
    std::set<std::string> placed;
    while (order.size() < dag.stages.size()) {
        for (const auto& s : dag.stages) {
            if (placed.count(s.name))
                continue;
            auto preds = predecessors(s);
            bool ready = std::all_of(preds.begin(), preds.end(), [&](const std::string& p) {
                return placed.count(p) || !dag.find(p);
            });
            if (ready) {
                order.push_back(s.name);
                placed.insert(s.name);
                break;
            }
        }
    }
    return order;
}

StageDAG dag_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("stages") || !j["stages"].is_array())
        throw ConfigError("DAG needs a 'stages' list");
    StageDAG dag;
    dag.external_inputs = string_list(j, "external_inputs");
    static const std::set<std::string> known{"name",        "kind",         "data_inputs", "optional_inputs",
                                             "order_after", "precondition", "params"};
    for (const auto& s : j["stages"]) {
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string())
            throw ConfigError("every stage needs a name");
        for (const auto& [key, _] : s.items())
            if (!known.count(key))
                throw ConfigError("stage '" + s["name"].get<std::string>() + "': unknown field '" + key + "'");
        StageSpec spec;
        spec.name = s["name"].get<std::string>();
        spec.kind = s.value("kind", spec.name);
        spec.data_inputs = string_list(s, "data_inputs");
        spec.optional_inputs = string_list(s, "optional_inputs");
        spec.order_after = string_list(s, "order_after");
        spec.precondition = precondition_from_json(s.value("precondition", json("always")));
        if (s.contains("params")) {
            if (!s["params"].is_object() && !s["params"].is_null())
                throw ConfigError("stage '" + spec.name + "': params must be a mapping");
            if (s["params"].is_object())
                spec.params = s["params"];
        }
        dag.stages.push_back(std::move(spec));
    }
    return dag;
}

json dag_to_json(const StageDAG& dag)
{
    json stages = json::array();
    for (const auto& s : dag.stages) {
        json e{{"name", s.name}, {"kind", s.kind}};
        if (!s.data_inputs.empty())
            e["data_inputs"] = s.data_inputs;
        if (!s.optional_inputs.empty())
            e["optional_inputs"] = s.optional_inputs;
        if (!s.order_after.empty())
            e["order_after"] = s.order_after;
        if (s.precondition.kind != Precondition::Kind::Always)
            e["precondition"] = precondition_to_json(s.precondition);
        if (!s.params.empty())
            e["params"] = s.params;
        stages.push_back(std::move(e));
    }
    return json{{"external_inputs", dag.external_inputs}, {"stages", stages}};
}

} // namespace evoforge::dag
