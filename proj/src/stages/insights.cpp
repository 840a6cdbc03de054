#include "evoforge/stages/insights.hpp"

#include "evoforge/mutation/prompt.hpp"
#include "evoforge/stages/templates.hpp"

#include <spdlog/spdlog.h>

namespace evoforge::stages {

std::string insights_prompt(const InsightRequest& request)
{
    const auto& overrides = request.problem.prompt_templates;
    auto it = overrides.find("insights");
    std::string_view tmpl = it != overrides.end() ? std::string_view(it->second) : default_insights_template();
    return fill_template(tmpl, {
                                   {"task_description", request.problem.task_description},
                                   {"source", request.program.source},
                                   {"metrics", mutation::render_metrics(request.metrics, request.problem.schemas)},
                                   {"error_trace", request.error_trace.value_or("none")},
                                   {"max_insights", std::to_string(request.max_insights)},
                               });
}

std::vector<mutation::Insight> generate_insights(const InsightRequest& request, mutation::ModelRouter& router,
                                                 Rng& rng)
{
    try {
        auto reply = router.route_and_call(mutation::StageKind::Insights, insights_prompt(request), rng);
        return mutation::parse_insights(reply, request.max_insights);
    } catch (const mutation::LlmUnavailable& e) {
        spdlog::warn("insights for {} unavailable: {}", request.program.id.str(), e.what());
        return {};
    }
}

} // namespace evoforge::stages
