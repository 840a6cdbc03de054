#include "evoforge/orchestrator/run.hpp"

#include "evoforge/core/error.hpp"

#include <sstream>

namespace evoforge::orchestrator {

using json = nlohmann::json;

namespace {

std::string render_metrics(const json& metrics, const std::vector<MetricSchema>& schemas)
{
    std::string out;
    for (const auto& s : schemas) {
        if (!metrics.contains(s.name))
            continue;
        if (!out.empty())
            out += ' ';
        out += s.name + "=" + format_metric(metrics[s.name].get<double>(), s);
    }
    return out;
}

} // namespace

std::string inspect(const std::filesystem::path& runs_dir, const std::string& ns)
{
    auto doc = export_archive(runs_dir, ns);
    auto schemas = doc.at("schemas").get<std::vector<MetricSchema>>();
    std::ostringstream out;
    out << "namespace " << ns << "\n";
    if (doc.at("elites").empty()) {
        out << "empty archive\n";
        return out.str();
    }
    for (const auto& island : doc.at("islands")) {
        const auto& cells = island.at("cells");
        out << "island " << island.at("id").get<std::string>() << ": " << cells.size() << " occupied cell"
            << (cells.size() == 1 ? "" : "s") << "\n";
        for (const auto& c : cells)
            out << "  [" << c.at("cell").get<std::string>() << "] " << c.at("elite").get<std::string>() << "  "
                << render_metrics(c.at("metrics"), schemas) << "\n";
    }
    const auto& best = doc.at("elites").front();
    out << "best " << best.at("id").get<std::string>() << "  " << render_metrics(best.at("metrics"), schemas)
        << "\n";
    return out.str();
}

} // namespace evoforge::orchestrator
