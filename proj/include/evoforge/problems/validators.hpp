#pragma once

#include "evoforge/problems/validation.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace evoforge::problems {

/// How a problem turns raw candidate output into metrics: either a built-in
/// kind with parameters, or the source of an external validate module that
/// is executed in the sandbox with entry point `validate`.
struct ValidatorBinding {
    std::string builtin;
    nlohmann::json params = nlohmann::json::object();
    std::string external_source;

    bool is_builtin() const { return !builtin.empty(); }
};

/// heilbronn, circle_packing, kissing, bin_packing, toy_quadratic
const std::vector<std::string>& builtin_validator_kinds();

/// Throws ConfigError for unknown kinds or bad parameters.
void check_builtin_binding(const ValidatorBinding& binding);

/// Dispatches to the built-in validator. `context` is the problem's
/// context_data (bin packing reads its instances from it). Total over `raw`.
ValidationReport run_builtin_validator(const ValidatorBinding& binding, const nlohmann::json& raw,
                                       const nlohmann::json& context);

} // namespace evoforge::problems
