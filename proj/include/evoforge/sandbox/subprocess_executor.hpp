#pragma once

#include "evoforge/sandbox/executor.hpp"

#include <map>
#include <vector>

namespace evoforge::sandbox {

/// Runs each request in a fresh child process (its own process group) that
/// speaks the newline-delimited JSON protocol on stdin/stdout.
///
/// The wall timeout kills the whole process group. The group is also killed
/// after a normal exit so that nothing the candidate spawned outlives the
/// execution. memory_cap becomes RLIMIT_AS in the child and is exported as
/// SANDBOX_MEMORY_CAP_BYTES for the runner.
class SubprocessExecutor final : public Executor {
public:
    explicit SubprocessExecutor(std::vector<std::string> interpreter_cmd,
                                std::map<std::string, std::string> extra_env = {});

    ExecutionResult execute(std::string_view source, ExecMode mode, const nlohmann::json& context,
                            const ResourceLimits& limits, std::string_view entry = "entrypoint") override;

private:
    std::vector<std::string> command_;
    std::map<std::string, std::string> extra_env_;
};

} // namespace evoforge::sandbox
