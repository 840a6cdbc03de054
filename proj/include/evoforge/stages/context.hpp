#pragma once

#include "evoforge/mutation/context.hpp"
#include "evoforge/stages/services.hpp"

namespace evoforge::stages {

/// Builds the mutation context: insights sorted by severity (stable) and cut
/// to max_insights, analyses cut to max_analyses per direction, source and
/// each explanation or trace cut to code_chars. Any cut sets `truncated`.
mutation::MutationContext assemble_mutation_context(const Program& program, const Metrics& metrics,
                                                    std::vector<mutation::Insight> insights,
                                                    std::vector<mutation::LineageAnalysis> from_ancestors,
                                                    std::vector<mutation::LineageAnalysis> to_descendants,
                                                    std::optional<std::string> error_trace,
                                                    const ContextCaps& caps = {});

} // namespace evoforge::stages
