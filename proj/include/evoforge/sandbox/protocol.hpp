#pragma once

#include "evoforge/sandbox/executor.hpp"

#include <string>
#include <string_view>

namespace evoforge::sandbox {

/// Request frame: one line of JSON terminated by '\n'.
///   {"op":"parse"|"run","source":str,"context":json|null,"entry":"entrypoint"}
std::string encode_request(std::string_view source, ExecMode mode, const nlohmann::json& context,
                           std::string_view entry = "entrypoint");

/// Decodes a response frame. Total: anything other than exactly one of
///   {"ok":true,"value":json}
///   {"ok":false,"error":{"type":str,"message":str,"traceback":str}}
/// yields ProtocolError.
ExecutionOutcome decode_response(std::string_view frame);

/// Parses JSON keeping integers that overflow 64 bits exact: such literals
/// become {"$bigint": "<digits>"}. Throws nlohmann::json::parse_error.
nlohmann::json parse_json_exact(std::string_view text);

/// Inverse of parse_json_exact's bigint tagging: serializes with tagged
/// integers written back as bare number literals.
std::string dump_json_exact(const nlohmann::json& value);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

} // namespace evoforge::sandbox
