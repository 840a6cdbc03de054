#pragma once

#include "evoforge/core/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace evoforge::mutation {

/// Why a model response could not be turned into offspring source. The
/// reason strings double as telemetry keys.
class ParseFailure : public Error {
public:
    ParseFailure(std::string reason, const std::string& detail)
        : Error(reason + ": " + detail), reason_(std::move(reason))
    {
    }
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

/// Wraps source in a ```python fence so that parse_rewrite returns it
/// unchanged.
std::string render_fenced(std::string_view source, std::string_view language = "python");

/// Contents of the last complete fenced block. Throws ParseFailure with
/// reason "no_fenced_block" or "empty_block".
std::string parse_rewrite(std::string_view response);

struct DiffBlock {
    std::string search;
    std::string replace;

    bool operator==(const DiffBlock&) const = default;
};

/// Renders the SEARCH/REPLACE grammar:
///   <<<<<<< SEARCH
///   old lines
///   =======
///   new lines
///   >>>>>>> REPLACE
std::string render_diff(const std::vector<DiffBlock>& blocks);

/// Extracts every block. Throws ParseFailure("diff_malformed") on an
/// unterminated block or a stray marker.
std::vector<DiffBlock> parse_diff_blocks(std::string_view response);

/// Applies blocks in order; each SEARCH text must occur exactly once in the
/// current source. Throws ParseFailure with "diff_not_found" or
/// "diff_ambiguous".
std::string apply_blocks(std::string source, const std::vector<DiffBlock>& blocks);

std::string apply_diff(std::string_view parent_source, std::string_view response);

} // namespace evoforge::mutation
