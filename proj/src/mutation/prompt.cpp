#include "evoforge/mutation/prompt.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace evoforge::mutation {

namespace {

std::string format_delta(double delta, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.*f", precision, delta);
    return buf;
}

std::string format_plain(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string short_id(const ProgramId& id) { return id.str().substr(0, 8); }

int delta_precision(std::span<const MetricSchema> schemas)
{
    for (const auto& s : schemas)
        if (s.is_primary)
            return s.precision;
    return 4;
}

} // namespace

std::string_view to_string(MutationMode m) { return m == MutationMode::Rewrite ? "rewrite" : "diff"; }

MutationMode mutation_mode_from_string(std::string_view s)
{
    if (s == "rewrite")
        return MutationMode::Rewrite;
    if (s == "diff")
        return MutationMode::Diff;
    throw ConfigError("unknown mutation mode '" + std::string(s) + "' (expected rewrite or diff)");
}

std::string_view rewrite_instructions()
{
    return "Write an improved version of the program above. Output the complete program in a single "
           "```python fenced block. Make the targeted improvement and keep the rest of the code as it is; "
           "the program must still define entrypoint().";
}

std::string_view diff_instructions()
{
    return "Propose an improvement as one or more search/replace edits against the first parent program. "
           "Use exactly this format for every edit:\n"
           "<<<<<<< SEARCH\n"
           "lines copied verbatim from the current program\n"
           "=======\n"
           "the replacement lines\n"
           ">>>>>>> REPLACE\n"
           "Each SEARCH section must match exactly one place in the program, including indentation. "
           "Edits are applied in order.";
}

std::string render_metrics(const Metrics& metrics, std::span<const MetricSchema> schemas)
{
    std::string out;
    std::set<std::string, std::less<>> shown;
    for (const auto& s : schemas) {
        auto it = metrics.find(s.name);
        if (it == metrics.end())
            continue;
        out += "- " + s.name + ": " + format_metric(it->second, s) + (s.is_primary ? " (primary)" : "") + "\n";
        shown.insert(s.name);
    }
    for (const auto& [name, value] : metrics)
        if (!shown.count(name))
            out += "- " + name + ": " + format_plain(value) + "\n";
    return out;
}

std::string build_prompt(std::string_view task_description, std::span<const MutationContext> contexts,
                         MutationMode mode, const PromptOptions& options)
{
    if (contexts.empty())
        throw Error("build_prompt needs at least one parent context");
    const int precision = delta_precision(options.schemas);

    std::string p;
    p += "# Task\n\n";
    p += task_description;
    if (p.back() != '\n')
        p += '\n';

    for (std::size_t i = 0; i < contexts.size(); ++i) {
        const auto& c = contexts[i];
        p += "\n# Parent " + std::to_string(i + 1) + "\n\n";
        p += "## Source\n\n" + std::string("```python\n") + c.source;
        if (c.source.empty() || c.source.back() != '\n')
            p += '\n';
        p += "```\n\n## Metrics\n\n" + render_metrics(c.metrics, options.schemas);
        if (c.error_trace && !c.error_trace->empty())
            p += "\n## Error trace\n\n```\n" + *c.error_trace + "\n```\n";
        if (!c.insights.empty()) {
            p += "\n## Insights\n\n";
            for (const auto& ins : c.insights)
                p += "- " + render_insight(ins) + "\n";
        }
        if (!c.lineage_from_ancestors.empty()) {
            p += "\n## Lineage from ancestors\n\n";
            for (const auto& a : c.lineage_from_ancestors)
                p += "- ancestor " + short_id(a.parent_id) + " -> " + short_id(a.child_id) + " (delta " +
                     format_delta(a.primary_delta, precision) + "): " + a.explanation + "\n";
        }
        if (!c.lineage_to_descendants.empty()) {
            p += "\n## Lineage to descendants\n\n";
            for (const auto& a : c.lineage_to_descendants)
                p += "- this program -> descendant " + short_id(a.child_id) + " (delta " +
                     format_delta(a.primary_delta, precision) + "): " + a.explanation + "\n";
        }
        if (c.truncated)
            p += "\n(Parts of this context were truncated.)\n";
    }

    p += "\n# Instructions\n\n";
    p += mode == MutationMode::Rewrite ? rewrite_instructions() : diff_instructions();
    p += '\n';

    if (p.size() > options.max_prompt_chars)
        throw PromptTooLong("prompt of " + std::to_string(p.size()) + " characters exceeds the budget of " +
                            std::to_string(options.max_prompt_chars));
    return p;
}

} // namespace evoforge::mutation
