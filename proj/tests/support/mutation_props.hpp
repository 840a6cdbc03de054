#pragma once

#include "evoforge/core/random.hpp"
#include "evoforge/mutation/context.hpp"
#include "evoforge/mutation/parsing.hpp"

#include <string>
#include <vector>

namespace evoforge::testing {

/// Random printable text over an alphabet that includes fence and marker
/// characters, so generated sources brush against the grammar.
inline std::string random_line(Rng& rng, std::size_t max_len = 30)
{
    static const std::string alphabet = "abcxyz0123456789 _=()[]:#'\"<>`\t+-*/.,";
    std::string s;
    const auto n = rng.below(max_len + 1);
    for (std::size_t i = 0; i < n; ++i)
        s.push_back(alphabet[rng.below(alphabet.size())]);
    return s;
}

inline bool is_fence_line(const std::string& line)
{
    auto p = line.find_first_not_of(" \t");
    return p != std::string::npos && line.compare(p, 3, "```") == 0;
}

inline bool is_marker_line(std::string line)
{
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
        line.pop_back();
    return line == "<<<<<<< SEARCH" || line == "=======" || line == ">>>>>>> REPLACE";
}

/// Multi-line source with no fence lines and at least one non-blank char.
inline std::string random_source(Rng& rng, std::size_t max_lines = 12)
{
    std::string out;
    const auto n = 1 + rng.below(max_lines);
    for (std::size_t i = 0; i < n; ++i) {
        auto line = random_line(rng);
        if (is_fence_line(line) || is_marker_line(line))
            line = "x" + line;
        out += (i ? "\n" : "") + line;
    }
    if (out.find_first_not_of(" \t\r\n") == std::string::npos)
        out += "pass";
    return out;
}

/// Counterexamples found over `cases` random trials; empty means the
/// property held.
struct PropertyResult {
    std::size_t cases = 0;
    std::vector<std::string> counterexamples;
    bool ok() const { return counterexamples.empty(); }
};

/// parse_rewrite(render_fenced(s)) == s, also when chatter surrounds the
/// block and an earlier block precedes it.
inline PropertyResult rewrite_round_trip(std::uint64_t seed, std::size_t cases)
{
    Rng rng(seed);
    PropertyResult r{cases, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        auto src = random_source(rng);
        std::string response;
        if (rng.below(2))
            response += "Here is my reasoning.\n" + mutation::render_fenced("old draft") + "Better:\n";
        response += mutation::render_fenced(src);
        if (rng.below(2))
            response += "Hope this helps.\n";
        try {
            if (mutation::parse_rewrite(response) != src)
                r.counterexamples.push_back(src);
        } catch (const std::exception& e) {
            r.counterexamples.push_back(src + " -> " + e.what());
        }
    }
    return r;
}

/// Applying a rendered diff whose SEARCH texts are unique lines of the
/// parent equals the direct string substitution, and the inverse patch
/// (blocks reversed, SEARCH and REPLACE swapped) restores the parent.
inline PropertyResult diff_round_trip(std::uint64_t seed, std::size_t cases)
{
    Rng rng(seed);
    PropertyResult r{cases, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        const auto n = 3 + rng.below(8);
        std::vector<std::string> lines;
        for (std::size_t k = 0; k < n; ++k) {
            auto l = random_line(rng, 20);
            if (is_marker_line(l))
                l = "y" + l;
            lines.push_back("L" + std::to_string(k) + ":" + l);
        }
        std::string parent;
        for (std::size_t k = 0; k < n; ++k)
            parent += lines[k] + "\n";
        std::vector<mutation::DiffBlock> blocks;
        std::string expected = parent;
        for (std::size_t k = 0; k < n; ++k) {
            if (rng.below(3) != 0)
                continue;
            std::string replacement = "R" + std::to_string(k) + ":" + random_line(rng, 20);
            if (is_marker_line(replacement))
                replacement = "z" + replacement;
            blocks.push_back({lines[k], replacement});
            auto pos = expected.find(lines[k] + "\n");
            expected.replace(pos, lines[k].size(), replacement);
        }
        if (blocks.empty())
            continue;
        try {
            auto parsed = mutation::parse_diff_blocks("Edits:\n" + mutation::render_diff(blocks) + "done\n");
            auto patched = mutation::apply_blocks(parent, parsed);
            std::vector<mutation::DiffBlock> inverse;
            for (auto it = parsed.rbegin(); it != parsed.rend(); ++it)
                inverse.push_back({it->replace, it->search});
            if (parsed != blocks || patched != expected || mutation::apply_blocks(patched, inverse) != parent)
                r.counterexamples.push_back(parent);
        } catch (const std::exception& e) {
            r.counterexamples.push_back(parent + " -> " + e.what());
        }
    }
    return r;
}

/// A SEARCH text occurring twice is always rejected as ambiguous and one
/// absent from the parent as not found.
inline PropertyResult diff_rejections(std::uint64_t seed, std::size_t cases)
{
    Rng rng(seed);
    PropertyResult r{cases, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        auto dup = "D" + random_line(rng, 10);
        std::string parent = "a\n" + dup + "\nb\n" + dup + "\n";
        auto expect_reason = [&](const std::string& search, const std::string& reason) {
            try {
                mutation::apply_blocks(parent, {{search, "q"}});
                r.counterexamples.push_back(search + " accepted");
            } catch (const mutation::ParseFailure& e) {
                if (e.reason() != reason)
                    r.counterexamples.push_back(search + " -> " + e.reason());
            }
        };
        expect_reason(dup, "diff_ambiguous");
        expect_reason("never-present-" + random_line(rng, 10) + "\x01", "diff_not_found");
    }
    return r;
}

/// render_insight then parse_insight_line is the identity for texts
/// without line breaks.
inline PropertyResult insight_round_trip(std::uint64_t seed, std::size_t cases)
{
    Rng rng(seed);
    PropertyResult r{cases, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        mutation::Insight in;
        in.category = static_cast<mutation::InsightCategory>(rng.below(4));
        in.effect = static_cast<mutation::InsightEffect>(rng.below(3));
        in.severity = static_cast<mutation::InsightSeverity>(rng.below(3));
        in.text = "t" + random_line(rng) + "e";
        auto back = mutation::parse_insight_line(mutation::render_insight(in));
        if (!back || !(*back == in))
            r.counterexamples.push_back(mutation::render_insight(in));
    }
    return r;
}

} // namespace evoforge::testing
