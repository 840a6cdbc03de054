#pragma once

#include "evoforge/core/random.hpp"
#include "evoforge/mutation/router.hpp"
#include "evoforge/problems/problem.hpp"
#include "evoforge/sandbox/executor.hpp"
#include "evoforge/store/program_store.hpp"

#include <memory>

namespace evoforge::stages {

enum class RelativeStrategy { TopFitness, MostRecent };

RelativeStrategy relative_strategy_from_string(std::string_view s);
std::string_view to_string(RelativeStrategy s);

struct LineageOptions {
    RelativeStrategy strategy = RelativeStrategy::TopFitness;
    std::size_t k = 3;
    std::size_t ancestor_depth = 5;
    std::size_t descendant_depth = 1;
    bool raw_delta = false; ///< report child - parent without direction normalization
};

struct ContextCaps {
    std::size_t code_chars = 8000;
    std::size_t max_insights = 5;
    std::size_t max_analyses = 3;
};

/// Everything the built-in stages need. Shared read-only by all stage
/// instances of one run.
struct StageServices {
    std::shared_ptr<store::ProgramStore> store;
    std::shared_ptr<sandbox::Executor> executor;
    sandbox::ResourceLimits limits;
    std::shared_ptr<const problems::ProblemContext> problem;
    std::shared_ptr<mutation::ModelRouter> router; ///< null disables LLM-backed stages
    std::uint64_t seed = 0;
    LineageOptions lineage;
    ContextCaps caps;
    std::size_t max_insights = 8;
};

/// Random stream for one LLM call, independent of scheduling order.
Rng derive_rng(std::uint64_t seed, const ProgramId& id, std::string_view purpose);

/// Name of the external DAG input carrying the problem's context_data.
inline constexpr std::string_view kProblemContextInput = "problem_context";

} // namespace evoforge::stages
