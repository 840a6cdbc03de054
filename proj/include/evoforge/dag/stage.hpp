#pragma once

#include "evoforge/core/program.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <variant>

namespace evoforge::dag {

struct Done {
    nlohmann::json value;
};

struct Skipped {
    std::string reason;
};

struct Errored {
    std::string message;
    std::string trace;
};

using StageOutcome = std::variant<Done, Skipped, Errored>;
using OutcomeMap = std::map<std::string, StageOutcome, std::less<>>;

/// {"status": "done"|"skipped"|"errored", ...}
nlohmann::json outcome_to_json(const StageOutcome& outcome);
StageOutcome outcome_from_json(const nlohmann::json& j);
nlohmann::json outcomes_to_json(const OutcomeMap& outcomes);

inline bool is_done(const StageOutcome& o) { return std::holds_alternative<Done>(o); }

/// Thrown by stages to report an Errored outcome with a separate trace.
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string message, std::string trace = {})
        : std::runtime_error(std::move(message)), trace_(std::move(trace))
    {
    }
    const std::string& trace() const { return trace_; }

private:
    std::string trace_;
};

struct StageContext {
    const Program& program;
    std::string_view stage_name;
    const nlohmann::json& params;
    /// Done values of data inputs and external inputs, by name.
    std::map<std::string, const nlohmann::json*, std::less<>> inputs;
    /// Outcomes of optional inputs, by name.
    std::map<std::string, const StageOutcome*, std::less<>> optional;

    const nlohmann::json& input(std::string_view name) const;
    const StageOutcome* optional_outcome(std::string_view name) const;
};

/// A stage implementation. Instances are shared across programs and must be
/// reentrant; failures are reported by throwing.
class Stage {
public:
    virtual ~Stage() = default;

    virtual nlohmann::json run(const StageContext& ctx) = 0;

    /// Stages that read live state (for example the store) opt out.
    virtual bool cacheable() const { return true; }

    /// Configuration that affects the output beyond params (model route,
    /// template text). Part of the cache key.
    virtual std::string config_digest() const { return {}; }
};

} // namespace evoforge::dag
