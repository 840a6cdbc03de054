#pragma once

#include "evoforge/core/program.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace evoforge::mutation {

enum class InsightCategory { Algorithmic, Structural, Numerical, Other };
enum class InsightEffect { Beneficial, Harmful, Neutral };
enum class InsightSeverity { Low, Medium, High };

struct Insight {
    InsightCategory category = InsightCategory::Other;
    InsightEffect effect = InsightEffect::Neutral;
    InsightSeverity severity = InsightSeverity::Low;
    std::string text;

    bool operator==(const Insight&) const = default;
};

/// `category [effect] (severity): text`
std::string render_insight(const Insight& insight);

/// Parses one rendered line; leading list markers ("-", "*", "1.") are
/// tolerated. nullopt for anything that does not match the grammar.
std::optional<Insight> parse_insight_line(std::string_view line);

/// Every parseable line of a model response, at most `max_insights`.
std::vector<Insight> parse_insights(std::string_view response, std::size_t max_insights);

std::string_view to_string(InsightCategory c);
std::string_view to_string(InsightEffect e);
std::string_view to_string(InsightSeverity s);

struct LineageAnalysis {
    ProgramId parent_id;
    ProgramId child_id;
    double primary_delta = 0.0; ///< positive means the child improved
    std::string explanation;

    bool operator==(const LineageAnalysis&) const = default;
};

struct MutationContext {
    ProgramId program_id;
    std::string source;
    Metrics metrics;
    std::vector<Insight> insights;
    std::vector<LineageAnalysis> lineage_from_ancestors;
    std::vector<LineageAnalysis> lineage_to_descendants;
    std::optional<std::string> error_trace;
    bool truncated = false;

    bool operator==(const MutationContext&) const = default;
};

void to_json(nlohmann::json& j, const Insight& i);
void from_json(const nlohmann::json& j, Insight& i);
void to_json(nlohmann::json& j, const LineageAnalysis& a);
void from_json(const nlohmann::json& j, LineageAnalysis& a);
void to_json(nlohmann::json& j, const MutationContext& c);
void from_json(const nlohmann::json& j, MutationContext& c);

} // namespace evoforge::mutation
