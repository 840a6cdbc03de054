#pragma once

#include "evoforge/core/metric_schema.hpp"
#include "evoforge/problems/validators.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evoforge::problems {

struct ProblemContext {
    std::string name;
    std::string task_description;
    std::vector<MetricSchema> schemas;
    ValidatorBinding validator;
    std::vector<std::string> initial_programs;
    nlohmann::json context_data; ///< null when the problem has no context
    std::optional<std::string> seed_namespace;
    std::map<std::string, std::string> prompt_templates; ///< prompts/<name>.txt overrides
    std::filesystem::path directory;

    const MetricSchema& primary() const { return primary_schema(schemas); }
};

/// Loads a problem directory:
///   task_description.txt
///   metrics.yaml          metrics list plus `builtin: <kind>` and `params`,
///                         or a sibling validate.py
///   initial_programs/*.py (sorted by file name)
///   context.json          optional; {"generate": {...}} expands to
///                         bin-packing instances
///   prompts/*.txt         optional template overrides
/// `loc` and `chars` schemas are appended when the problem does not declare
/// them. Throws ConfigError naming the offending file.
ProblemContext load_problem(const std::filesystem::path& directory,
                            std::optional<std::string> seed_namespace = std::nullopt);

} // namespace evoforge::problems
