#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace evoforge::sandbox {

struct ResourceLimits {
    std::chrono::milliseconds wall_timeout{10'000};
    std::uint64_t memory_cap = 2ULL << 30; ///< bytes of address space
    std::size_t output_cap = 1 << 20;      ///< bytes per stream

    /// Throws ConfigError unless every limit is positive.
    void validate() const;
};

enum class ExecMode { ParseOnly, Run };

struct Value {
    nlohmann::json payload;
};

struct CandidateError {
    std::string type;
    std::string message;
    std::string traceback;
};

struct Timeout {};

struct ProtocolError {
    std::string detail;
};

using ExecutionOutcome = std::variant<Value, CandidateError, Timeout, ProtocolError>;

struct ExecutionResult {
    ExecutionOutcome outcome;
    std::string stdout_text; ///< raw stdout, truncated at output_cap
    std::string stderr_text; ///< truncated at output_cap
    std::chrono::milliseconds wall_time{0};
    int process_group = 0; ///< pgid of the child, 0 for in-process executors

    bool ok() const { return std::holds_alternative<Value>(outcome); }
    const nlohmann::json& value() const { return std::get<Value>(outcome).payload; }
};

/// One-line human-readable summary of a non-value outcome, e.g.
/// "ValueError: bad input\n<traceback>". Used as stage error traces.
std::string describe(const ExecutionOutcome& outcome);

/// Runs candidate source. Implementations never throw for candidate
/// misbehavior; every failure is an ExecutionOutcome variant.
class Executor {
public:
    virtual ~Executor() = default;

    virtual ExecutionResult execute(std::string_view source, ExecMode mode, const nlohmann::json& context,
                                    const ResourceLimits& limits, std::string_view entry = "entrypoint") = 0;
};

} // namespace evoforge::sandbox
