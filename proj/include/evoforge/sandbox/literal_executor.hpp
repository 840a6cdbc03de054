#pragma once

#include "evoforge/sandbox/executor.hpp"

namespace evoforge::sandbox {

/// In-process stand-in for the Python runner, for tests and toy problems.
///
/// Understands a deliberately tiny subset of Python inside `entrypoint`:
///   return <literal>        numbers, strings, True/False/None, lists, tuples,
///                           dicts, or the name of the declared parameter
///   raise Name("message")   CandidateError of that type
///   while True:             reported as Timeout without waiting
/// Statements are scanned in order and the first of these decides the result;
/// anything else in the body is ignored. Parse mode checks bracket/quote
/// balance and the presence of `def entrypoint(...):`.
class LiteralExecutor final : public Executor {
public:
    ExecutionResult execute(std::string_view source, ExecMode mode, const nlohmann::json& context,
                            const ResourceLimits& limits, std::string_view entry = "entrypoint") override;
};

/// Parses a Python literal expression into JSON. Throws evoforge::Error.
nlohmann::json parse_python_literal(std::string_view text);

} // namespace evoforge::sandbox
