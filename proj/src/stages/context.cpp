#include "evoforge/stages/context.hpp"

#include <algorithm>

namespace evoforge::stages {

namespace {

constexpr std::string_view kCutMarker = "\n... [truncated]";

bool cut(std::string& text, std::size_t budget)
{
    if (text.size() <= budget)
        return false;
    std::size_t end = budget;
    // Do not split a UTF-8 sequence.
    while (end > 0 && (static_cast<unsigned char>(text[end]) & 0xC0) == 0x80)
        --end;
    text.resize(end);
    text += kCutMarker;
    return true;
}

} // namespace

mutation::MutationContext assemble_mutation_context(const Program& program, const Metrics& metrics,
                                                    std::vector<mutation::Insight> insights,
                                                    std::vector<mutation::LineageAnalysis> from_ancestors,
                                                    std::vector<mutation::LineageAnalysis> to_descendants,
                                                    std::optional<std::string> error_trace, const ContextCaps& caps)
{
    mutation::MutationContext ctx;
    ctx.program_id = program.id;
    ctx.source = program.source;
    ctx.metrics = metrics;
    bool truncated = cut(ctx.source, caps.code_chars);

    std::stable_sort(insights.begin(), insights.end(), [](const auto& a, const auto& b) {
        return static_cast<int>(a.severity) > static_cast<int>(b.severity);
    });
    if (insights.size() > caps.max_insights) {
        insights.resize(caps.max_insights);
        truncated = true;
    }
    for (auto* list : {&from_ancestors, &to_descendants}) {
        if (list->size() > caps.max_analyses) {
            list->resize(caps.max_analyses);
            truncated = true;
        }
        for (auto& a : *list)
            truncated = cut(a.explanation, caps.code_chars) || truncated;
    }
    if (error_trace)
        truncated = cut(*error_trace, caps.code_chars) || truncated;

    ctx.insights = std::move(insights);
    ctx.lineage_from_ancestors = std::move(from_ancestors);
    ctx.lineage_to_descendants = std::move(to_descendants);
    ctx.error_trace = std::move(error_trace);
    ctx.truncated = truncated;
    return ctx;
}

} // namespace evoforge::stages
