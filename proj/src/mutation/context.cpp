#include "evoforge/mutation/context.hpp"

#include "evoforge/core/error.hpp"

#include <array>
#include <cctype>

namespace evoforge::mutation {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kCategories{"algorithmic", "structural", "numerical", "other"};
constexpr std::array<std::string_view, 3> kEffects{"beneficial", "harmful", "neutral"};
constexpr std::array<std::string_view, 3> kSeverities{"low", "medium", "high"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view word)
{
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == word)
            return static_cast<E>(i);
    return std::nullopt;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

template <typename E, std::size_t N>
E enum_from_json(const json& j, const std::array<std::string_view, N>& names, const char* what)
{
    auto v = lookup<E>(names, j.get<std::string>());
    if (!v)
        throw Error(std::string("unknown insight ") + what + " '" + j.get<std::string>() + "'");
    return *v;
}

} // namespace

std::string_view to_string(InsightCategory c) { return kCategories[static_cast<std::size_t>(c)]; }
std::string_view to_string(InsightEffect e) { return kEffects[static_cast<std::size_t>(e)]; }
std::string_view to_string(InsightSeverity s) { return kSeverities[static_cast<std::size_t>(s)]; }

std::string render_insight(const Insight& insight)
{
    return std::string(to_string(insight.category)) + " [" + std::string(to_string(insight.effect)) + "] (" +
           std::string(to_string(insight.severity)) + "): " + insight.text;
}

std::optional<Insight> parse_insight_line(std::string_view line)
{
    line = trim(line);
    // List markers: "- ", "* ", "1. ", "1) "
    if (!line.empty() && (line.front() == '-' || line.front() == '*')) {
        line.remove_prefix(1);
    } else {
        std::size_t d = 0;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d])))
            ++d;
        if (d > 0 && d < line.size() && (line[d] == '.' || line[d] == ')'))
            line.remove_prefix(d + 1);
    }
    line = trim(line);

    auto open_b = line.find('[');
    auto close_b = line.find(']', open_b);
    if (open_b == std::string_view::npos || close_b == std::string_view::npos)
        return std::nullopt;
    auto open_p = line.find('(', close_b);
    auto close_p = line.find(')', open_p);
    if (open_p == std::string_view::npos || close_p == std::string_view::npos)
        return std::nullopt;
    if (!trim(line.substr(close_b + 1, open_p - close_b - 1)).empty())
        return std::nullopt;
    auto rest = trim(line.substr(close_p + 1));
    if (rest.empty() || rest.front() != ':')
        return std::nullopt;

    auto category = lookup<InsightCategory>(kCategories, lower(trim(line.substr(0, open_b))));
    auto effect = lookup<InsightEffect>(kEffects, lower(trim(line.substr(open_b + 1, close_b - open_b - 1))));
    auto severity = lookup<InsightSeverity>(kSeverities, lower(trim(line.substr(open_p + 1, close_p - open_p - 1))));
    auto text = trim(rest.substr(1));
    if (!category || !effect || !severity || text.empty())
        return std::nullopt;
    return Insight{*category, *effect, *severity, std::string(text)};
}

std::vector<Insight> parse_insights(std::string_view response, std::size_t max_insights)
{
    std::vector<Insight> out;
    while (!response.empty() && out.size() < max_insights) {
        auto nl = response.find('\n');
        if (auto insight = parse_insight_line(response.substr(0, nl)))
            out.push_back(std::move(*insight));
        if (nl == std::string_view::npos)
            break;
        response.remove_prefix(nl + 1);
    }
    return out;
}

void to_json(json& j, const Insight& i)
{
    j = json{{"category", to_string(i.category)},
             {"effect", to_string(i.effect)},
             {"severity", to_string(i.severity)},
             {"text", i.text}};
}

void from_json(const json& j, Insight& i)
{
    i.category = enum_from_json<InsightCategory>(j.at("category"), kCategories, "category");
    i.effect = enum_from_json<InsightEffect>(j.at("effect"), kEffects, "effect");
    i.severity = enum_from_json<InsightSeverity>(j.at("severity"), kSeverities, "severity");
    i.text = j.at("text").get<std::string>();
}

void to_json(json& j, const LineageAnalysis& a)
{
    j = json{{"parent_id", a.parent_id},
             {"child_id", a.child_id},
             {"primary_delta", a.primary_delta},
             {"explanation", a.explanation}};
}

void from_json(const json& j, LineageAnalysis& a)
{
    a.parent_id = j.at("parent_id").get<ProgramId>();
    a.child_id = j.at("child_id").get<ProgramId>();
    a.primary_delta = j.at("primary_delta").get<double>();
    a.explanation = j.value("explanation", std::string());
}

void to_json(json& j, const MutationContext& c)
{
    j = json{{"program_id", c.program_id},
             {"source", c.source},
             {"metrics", c.metrics},
             {"insights", c.insights},
             {"lineage_from_ancestors", c.lineage_from_ancestors},
             {"lineage_to_descendants", c.lineage_to_descendants},
             {"error_trace", c.error_trace ? json(*c.error_trace) : json()},
             {"truncated", c.truncated}};
}

void from_json(const json& j, MutationContext& c)
{
    c.program_id = j.at("program_id").get<ProgramId>();
    c.source = j.at("source").get<std::string>();
    c.metrics = j.at("metrics").get<Metrics>();
    c.insights = j.value("insights", std::vector<Insight>{});
    c.lineage_from_ancestors = j.value("lineage_from_ancestors", std::vector<LineageAnalysis>{});
    c.lineage_to_descendants = j.value("lineage_to_descendants", std::vector<LineageAnalysis>{});
    c.error_trace.reset();
    if (j.contains("error_trace") && j["error_trace"].is_string())
        c.error_trace = j["error_trace"].get<std::string>();
    c.truncated = j.value("truncated", false);
}

} // namespace evoforge::mutation
