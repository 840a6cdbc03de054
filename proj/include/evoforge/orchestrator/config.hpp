#pragma once

#include "evoforge/dag/stage_dag.hpp"
#include "evoforge/evolution/behavior_space.hpp"
#include "evoforge/mutation/llm_client.hpp"
#include "evoforge/mutation/prompt.hpp"
#include "evoforge/mutation/router.hpp"
#include "evoforge/sandbox/executor.hpp"
#include "evoforge/stages/services.hpp"
#include "evoforge/store/snapshot.hpp"

#include <array>
#include <filesystem>

namespace evoforge::orchestrator {

/// Option groups selectable with `group=option` overrides; each option is
/// configs/<group>/<option>.yaml and is merged into the subtree of that name.
inline constexpr std::array<std::string_view, 3> kConfigGroups = {"algorithm", "llm", "dag"};

struct IslandConfig {
    std::string id;
    evolution::BehaviorSpaceSpec space; ///< empty dims: primary metric x validity
};

struct AlgorithmConfig {
    std::string kind = "single_island"; ///< or multi_island
    std::uint32_t bins = 16;
    std::vector<IslandConfig> islands;
    std::size_t migration_interval = 0;
    std::size_t migration_top_k = 1;
    std::size_t batch = 4;
    std::size_t parents_per_offspring = 1;
    std::string mutation_mode = "rewrite";
};

struct LlmConfig {
    std::string kind = "mock";   ///< mock or http
    std::filesystem::path mock_script; ///< {"mutation": script, "insights": script, "lineage": script}
    std::vector<mutation::ModelRoute> routes;
    mutation::RetryPolicy retry;
    std::size_t max_in_flight = 8;
    std::string api_key_env = "EVOFORGE_LLM_API_KEY";
};

struct ExecutionConfig {
    std::uint64_t seed = 0;
    sandbox::ResourceLimits limits;
    std::size_t max_programs = 4;
    std::size_t max_stages = 4;
    std::size_t mutation_threads = 1;
    bool single_threaded = false; ///< one worker everywhere plus a logical clock
    std::string executor = "subprocess"; ///< or literal
    std::vector<std::string> interpreter;
};

struct BudgetConfig {
    std::size_t max_generations = 10;
    std::optional<std::size_t> max_llm_calls; ///< 0 in the file means unlimited
};

struct RunConfig {
    std::string profile;
    nlohmann::json tree; ///< composed document, for reporting
    std::string problem_name;
    std::filesystem::path problem_dir;
    std::optional<std::string> seed_namespace;
    std::filesystem::path seed_from; ///< exported archive to seed from
    AlgorithmConfig algorithm;
    LlmConfig llm;
    dag::StageDAG dag;
    ExecutionConfig execution;
    store::StoreBackend store = store::InMemoryBackend{};
    std::string namespace_name;
    BudgetConfig budget;
    stages::LineageOptions lineage;
    stages::ContextCaps caps;
    std::size_t max_insights = 8;
    std::size_t max_prompt_chars = 60'000;
    std::filesystem::path runs_dir;
};

/// Installed data directory holding configs/ and problems/. EVOFORGE_DATA_DIR
/// overrides the compiled-in default.
std::filesystem::path default_data_dir();

/// Layered document: defaults.yaml, default group options, the profile
/// (after its `extends` chain and `groups` selections), then overrides in
/// order. Throws ConfigError for an unknown profile, group option or key,
/// or a value whose type differs from the default.
nlohmann::json compose_tree(const std::filesystem::path& config_root, const std::string& profile,
                            const std::vector<std::string>& overrides);

/// compose_tree followed by typed parsing. Relative paths resolve against
/// the data directory (the parent of config_root).
RunConfig compose_config(const std::filesystem::path& config_root, const std::string& profile,
                         const std::vector<std::string>& overrides);

/// Typed view of a composed document.
RunConfig parse_run_config(const nlohmann::json& tree, const std::filesystem::path& data_dir);

/// Fail-fast checks before a run: DAG validity, problem loading and schema
/// checks, behavior dimensions, LLM routes and mock script presence.
void validate_run_config(const RunConfig& config);

/// Deep merge: objects merge key by key, everything else is replaced.
void deep_merge(nlohmann::json& into, const nlohmann::json& from);

mutation::ModelRoute route_from_json(const nlohmann::json& j);
nlohmann::json route_to_json(const mutation::ModelRoute& r);

} // namespace evoforge::orchestrator
