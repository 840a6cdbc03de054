#include "evoforge/stages/lineage.hpp"

#include "evoforge/mutation/prompt.hpp"
#include "evoforge/stages/templates.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>

namespace evoforge::stages {

double primary_delta(const Metrics& parent, const Metrics& child, const MetricSchema& primary, bool raw)
{
    auto p = parent.find(primary.name);
    auto c = child.find(primary.name);
    if (p == parent.end() || c == child.end())
        throw Error("primary metric '" + primary.name + "' missing from lineage pair");
    return raw ? c->second - p->second : directed_delta(p->second, c->second, primary);
}

std::string lineage_prompt(const problems::ProblemContext& problem, const Program& parent, const Program& child,
                           double delta)
{
    const auto& overrides = problem.prompt_templates;
    auto it = overrides.find("lineage");
    std::string_view tmpl = it != overrides.end() ? std::string_view(it->second) : default_lineage_template();
    const auto& primary = problem.primary();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.*f", primary.precision, delta);
    return fill_template(tmpl, {
                                   {"task_description", problem.task_description},
                                   {"parent_source", parent.source},
                                   {"child_source", child.source},
                                   {"parent_metrics", mutation::render_metrics(*parent.metrics, problem.schemas)},
                                   {"child_metrics", mutation::render_metrics(*child.metrics, problem.schemas)},
                                   {"primary_metric", primary.name},
                                   {"primary_delta", buf},
                               });
}

mutation::LineageAnalysis lineage_transition(const problems::ProblemContext& problem, const Program& parent,
                                             const Program& child, mutation::ModelRouter* router, Rng& rng,
                                             bool raw_delta)
{
    if (std::find(child.parent_ids.begin(), child.parent_ids.end(), parent.id) == child.parent_ids.end())
        throw Error("program " + parent.id.str() + " is not a parent of " + child.id.str());
    if (!parent.metrics || !child.metrics)
        throw Error("lineage analysis needs evaluated parent and child");
    mutation::LineageAnalysis out;
    out.parent_id = parent.id;
    out.child_id = child.id;
    out.primary_delta = primary_delta(*parent.metrics, *child.metrics, problem.primary(), raw_delta);
    if (router) {
        try {
            out.explanation = router->route_and_call(mutation::StageKind::Lineage,
                                                     lineage_prompt(problem, parent, child, out.primary_delta), rng);
            while (!out.explanation.empty() && std::isspace(static_cast<unsigned char>(out.explanation.back())))
                out.explanation.pop_back();
        } catch (const mutation::LlmUnavailable& e) {
            spdlog::warn("lineage explanation {} -> {} unavailable: {}", parent.id.str(), child.id.str(), e.what());
        }
    }
    return out;
}

std::vector<ProgramId> select_relatives(const Program& program, RelativeDirection direction,
                                        RelativeStrategy strategy, std::size_t k, store::ProgramStore& store,
                                        const MetricSchema& primary, std::size_t depth)
{
    std::vector<Program> found;
    std::set<ProgramId> seen{program.id};
    std::deque<std::pair<Program, std::size_t>> frontier{{program, 0}};
    while (!frontier.empty()) {
        auto [current, level] = std::move(frontier.front());
        frontier.pop_front();
        if (level == depth)
            continue;
        std::vector<Program> next;
        if (direction == RelativeDirection::Ancestors)
            next = store.parents(current.id);
        else
            next = store.descendants(current.id);
        for (auto& r : next) {
            if (!seen.insert(r.id).second)
                continue;
            frontier.emplace_back(r, level + 1);
            if (r.metrics)
                found.push_back(std::move(r));
        }
    }

    auto older = [](const Program& a, const Program& b) {
        if (a.created_at != b.created_at)
            return a.created_at < b.created_at;
        return a.id < b.id;
    };
    auto fitness = [&](const Program& p) {
        double v = p.metrics->count(primary.name) ? p.metrics->at(primary.name) : worst_value(primary);
        return primary.higher_is_better ? v : -v;
    };
    std::sort(found.begin(), found.end(), [&](const Program& a, const Program& b) {
        if (strategy == RelativeStrategy::TopFitness) {
            double fa = fitness(a), fb = fitness(b);
            if (fa != fb)
                return fa > fb;
        } else if (a.created_at != b.created_at) {
            return a.created_at > b.created_at;
        }
        return older(a, b);
    });
    std::vector<ProgramId> out;
    for (std::size_t i = 0; i < found.size() && i < k; ++i)
        out.push_back(found[i].id);
    return out;
}

} // namespace evoforge::stages
