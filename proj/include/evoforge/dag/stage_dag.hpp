#pragma once

#include "evoforge/dag/precondition.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace evoforge::dag {

/// One node of the pipeline.
///
/// data_inputs must all finish Done or the stage is skipped. optional_inputs
/// are delivered as whatever outcome they produced, so a stage can react to
/// an upstream error without being skipped by it. order_after only delays
/// the stage until the named stages finished.
struct StageSpec {
    std::string name;
    std::string kind;
    std::vector<std::string> data_inputs;
    std::vector<std::string> optional_inputs;
    std::vector<std::string> order_after;
    Precondition precondition;
    nlohmann::json params = nlohmann::json::object();

    bool operator==(const StageSpec&) const = default;
};

struct StageDAG {
    std::vector<StageSpec> stages;
    std::vector<std::string> external_inputs;

    const StageSpec* find(std::string_view name) const;
    bool operator==(const StageDAG&) const = default;
};

struct DagIssue {
    std::string kind; ///< duplicate, dangling, cycle, precondition, empty
    std::string message;
    std::vector<std::string> stages;
};

/// Structural check; an empty result means the DAG is valid.
std::vector<DagIssue> validate_dag(const StageDAG& dag);

/// Throws ConfigError listing every issue.
void require_valid(const StageDAG& dag);

/// Topological order preferring declaration order among ready stages.
/// Throws ConfigError when the DAG is invalid.
std::vector<std::string> topological_order(const StageDAG& dag);

StageDAG dag_from_json(const nlohmann::json& j);
nlohmann::json dag_to_json(const StageDAG& dag);

} // namespace evoforge::dag
