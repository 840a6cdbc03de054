#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace evoforge::dag {

/// Declarative stage guard. Config forms:
///   always
///   {exists: <stage>}                                   stage finished Done
///   {stage: <stage>, field: <key>, op: ">=", value: 1}  compare a Done output
///   {metric: <name>, equals: 1}                         compare a stored metric
/// `equals: v` is shorthand for `op: "==", value: v`. `field` may be a dotted
/// path; omitted, the whole output is compared.
struct Precondition {
    enum class Kind { Always, Exists, Compare, Metric };

    Kind kind = Kind::Always;
    std::string stage;
    std::string field;
    std::string op = "==";
    nlohmann::json value;

    std::string describe() const;
    bool operator==(const Precondition&) const = default;
};

Precondition precondition_from_json(const nlohmann::json& j);
nlohmann::json precondition_to_json(const Precondition& p);

/// Looks up a dotted path; nullptr when any segment is missing.
const nlohmann::json* find_path(const nlohmann::json& root, std::string_view dotted);

/// Applies `op` to (actual, expected). Numbers compare numerically; other
/// types support only == and !=. Throws ConfigError for unknown operators.
bool compare_json(const nlohmann::json& actual, std::string_view op, const nlohmann::json& expected);

} // namespace evoforge::dag
