#pragma once

#include "evoforge/core/program_factory.hpp"
#include "evoforge/evolution/selection.hpp"
#include "evoforge/mutation/mutate.hpp"

#include <functional>

namespace evoforge::evolution {

struct EvolutionOptions {
    std::size_t batch = 4; ///< offspring requested per step
    std::size_t parents_per_offspring = 1;
    std::size_t migration_interval = 0; ///< steps between migrations, 0 disables
    std::size_t migration_top_k = 1;
    mutation::MutationMode mode = mutation::MutationMode::Rewrite;
    mutation::PromptOptions prompt;
    std::size_t mutation_threads = 1; ///< 1 keeps the loop strictly single-threaded
};

struct StepReport {
    std::uint64_t step = 0;
    std::size_t inserted = 0; ///< completions drained into the archive
    std::size_t accepted = 0;
    std::size_t replaced = 0;
    std::size_t discarded = 0;
    std::size_t offspring = 0;
    std::size_t mutation_failures = 0;
    std::map<std::string, std::size_t> failures_by_reason;
    std::size_t migrated = 0;
    std::optional<double> best_fitness;
    std::vector<ProgramId> new_programs;
};

void to_json(nlohmann::json& j, const StepReport& r);

/// Source of the mutation context of a parent. Returning nullopt falls back
/// to source and metrics only.
using ContextProvider = std::function<std::optional<mutation::MutationContext>(const Program&)>;

/// The quality-diversity loop: single consumer of the completion feed.
class EvolutionEngine {
public:
    EvolutionEngine(Archive archive, std::shared_ptr<store::ProgramStore> store,
                    std::shared_ptr<mutation::ModelRouter> router, std::shared_ptr<ProgramFactory> factory,
                    std::string task_description, EvolutionOptions options, std::uint64_t seed,
                    ContextProvider contexts = {});

    /// Drains completions into the archive, migrates on schedule, selects
    /// parents and writes `batch` FRESH offspring. Mutation failures are
    /// counted, store errors propagate.
    StepReport step();

    /// Only the drain part of step(); returns the number inserted.
    std::size_t drain(StepReport& report);

    Archive& archive() { return archive_; }
    const Archive& archive() const { return archive_; }
    std::uint64_t steps() const { return steps_; }
    const std::map<std::string, std::size_t>& failure_totals() const { return failure_totals_; }

private:
    std::vector<std::size_t> target_islands(const Program& program) const;
    std::optional<std::size_t> pick_island(std::size_t slot) const;
    mutation::MutationContext context_for(const Program& parent) const;

    Archive archive_;
    std::shared_ptr<store::ProgramStore> store_;
    std::shared_ptr<mutation::ModelRouter> router_;
    std::shared_ptr<ProgramFactory> factory_;
    std::string task_description_;
    EvolutionOptions options_;
    Rng rng_;
    ContextProvider contexts_;
    store::CompletionCursor cursor_ = store::kCursorStart;
    std::uint64_t steps_ = 0;
    std::map<ProgramId, std::size_t> origin_;
    std::map<std::string, std::size_t> failure_totals_;
};

} // namespace evoforge::evolution
