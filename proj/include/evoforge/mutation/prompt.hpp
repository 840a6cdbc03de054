#pragma once

#include "evoforge/core/error.hpp"
#include "evoforge/core/metric_schema.hpp"
#include "evoforge/mutation/context.hpp"

#include <span>
#include <string>

namespace evoforge::mutation {

enum class MutationMode { Rewrite, Diff };

std::string_view to_string(MutationMode m);
MutationMode mutation_mode_from_string(std::string_view s);

class PromptTooLong : public Error {
public:
    using Error::Error;
};

struct PromptOptions {
    std::vector<MetricSchema> schemas; ///< for display precision and ordering
    std::size_t max_prompt_chars = 60'000;
};

/// Deterministic prompt: task description, one labelled section per parent
/// (fenced source, metrics, insights, lineage in both directions, error
/// trace) and the mode's instruction suffix. Throws PromptTooLong.
std::string build_prompt(std::string_view task_description, std::span<const MutationContext> contexts,
                         MutationMode mode, const PromptOptions& options = {});

/// Metric lines rendered with each schema's precision, schema order first.
std::string render_metrics(const Metrics& metrics, std::span<const MetricSchema> schemas);

std::string_view rewrite_instructions();
std::string_view diff_instructions();

} // namespace evoforge::mutation
