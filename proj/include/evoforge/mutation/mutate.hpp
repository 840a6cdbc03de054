#pragma once

#include "evoforge/mutation/prompt.hpp"
#include "evoforge/mutation/router.hpp"

#include <optional>

namespace evoforge::mutation {

struct MutationFailure {
    std::string reason; ///< telemetry key, e.g. "no_fenced_block", "llm_unavailable"
    std::string detail;
};

struct MutationResult {
    std::optional<std::string> source;
    std::optional<MutationFailure> failure;
    std::string prompt;
    std::string response;

    bool ok() const { return source.has_value(); }
};

/// build_prompt, route_and_call, then parse per mode. DIFF patches the first
/// parent's full source (contexts may hold truncated copies). Never throws
/// for prompt, transport or parse problems.
MutationResult mutate(std::span<const Program> parents, std::span<const MutationContext> contexts, MutationMode mode,
                      ModelRouter& router, Rng& rng, std::string_view task_description,
                      const PromptOptions& options = {});

} // namespace evoforge::mutation
