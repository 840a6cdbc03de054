#pragma once

#include "evoforge/evolution/engine.hpp"
#include "evoforge/orchestrator/config.hpp"

namespace evoforge::orchestrator {

struct RunResult {
    nlohmann::json report;
    nlohmann::json archive; ///< schemas plus the evolution snapshot
    std::filesystem::path output_dir;
    std::shared_ptr<mutation::ModelRouter> router;
    std::shared_ptr<store::ProgramStore> store;
};

/// Optional injections, mainly for tests.
struct RunHooks {
    std::shared_ptr<mutation::ModelRouter> router;   ///< replaces the configured LLM
    std::shared_ptr<sandbox::Executor> executor;     ///< replaces the configured executor
    std::function<void(const evolution::StepReport&)> on_generation;
};

/// Builds the model router for `config.llm` (mock script or HTTP routes).
std::shared_ptr<mutation::ModelRouter> build_router(const LlmConfig& config,
                                                    std::optional<std::size_t> call_budget);

/// Full run: validates the config, seeds, evaluates, evolves until a budget
/// is spent, then writes report.json, fitness.csv, archive.json and
/// store.json under runs_dir/<namespace>.
RunResult run_evolution(const RunConfig& config, const RunHooks& hooks = {});

/// Elite sources of an export document (see export_archive), best first.
std::vector<std::string> elite_sources(const nlohmann::json& exported);

/// Reads runs_dir/<ns>/archive.json and store.json. Throws ConfigError for
/// an unknown namespace.
nlohmann::json export_archive(const std::filesystem::path& runs_dir, const std::string& ns);

/// export_archive written to `path`.
void export_to_file(const std::filesystem::path& runs_dir, const std::string& ns, const std::filesystem::path& path);

/// Human-readable occupancy and best-per-cell metrics.
std::string inspect(const std::filesystem::path& runs_dir, const std::string& ns);

} // namespace evoforge::orchestrator
