#include "evoforge/mutation/parsing.hpp"

#include <optional>

namespace evoforge::mutation {

namespace {

struct LineRef {
    std::size_t begin; ///< offset of the first character
    std::size_t end;   ///< offset one past the last character, excluding '\n'
};

std::vector<LineRef> line_refs(std::string_view text)
{
    std::vector<LineRef> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size())
                out.push_back({pos, text.size()});
            break;
        }
        out.push_back({pos, nl});
        pos = nl + 1;
    }
    return out;
}

std::string_view rstrip(std::string_view s)
{
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string_view lstrip(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    return s;
}

bool is_fence(std::string_view line) { return lstrip(line).substr(0, 3) == "```"; }
bool is_bare_fence(std::string_view line) { return rstrip(lstrip(line)) == "```"; }

std::size_t count_occurrences(std::string_view haystack, std::string_view needle)
{
    std::size_t count = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1))
        ++count;
    return count;
}

std::string preview(std::string_view s)
{
    std::string out(s.substr(0, 60));
    if (s.size() > 60)
        out += "...";
    return out;
}

} // namespace

std::string render_fenced(std::string_view source, std::string_view language)
{
    return "```" + std::string(language) + "\n" + std::string(source) + "\n```\n";
}

std::string parse_rewrite(std::string_view response)
{
    const auto lines = line_refs(response);
    std::optional<std::pair<std::size_t, std::size_t>> last;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!is_fence(response.substr(lines[i].begin, lines[i].end - lines[i].begin)))
            continue;
        std::size_t j = i + 1;
        while (j < lines.size() && !is_bare_fence(response.substr(lines[j].begin, lines[j].end - lines[j].begin)))
            ++j;
        if (j == lines.size())
            break;
        // Content runs from after the opening line's newline to before the
        // closing line's preceding newline.
        const std::size_t start = lines[i].end + 1;
        const std::size_t stop = j == i + 1 ? start : lines[j].begin - 1;
        last = {start, std::max(start, stop)};
        i = j;
    }
    if (!last)
        throw ParseFailure("no_fenced_block", "response contains no complete fenced code block");
    std::string body(response.substr(last->first, last->second - last->first));
    if (body.find_first_not_of(" \t\r\n") == std::string::npos)
        throw ParseFailure("empty_block", "the last fenced code block is empty");
    return body;
}

std::string render_diff(const std::vector<DiffBlock>& blocks)
{
    std::string out;
    for (const auto& b : blocks)
        out += "<<<<<<< SEARCH\n" + b.search + "\n=======\n" + b.replace + "\n>>>>>>> REPLACE\n";
    return out;
}

std::vector<DiffBlock> parse_diff_blocks(std::string_view response)
{
    enum class State { Outside, Search, Replace };
    std::vector<DiffBlock> blocks;
    State state = State::Outside;
    std::vector<std::string_view> search, replace;
    auto join = [](const std::vector<std::string_view>& parts) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i)
                out += '\n';
            out += parts[i];
        }
        return out;
    };

    for (const auto& ref : line_refs(response)) {
        std::string_view raw = response.substr(ref.begin, ref.end - ref.begin);
        std::string_view marker = rstrip(raw);
        switch (state) {
        case State::Outside:
            if (marker == "<<<<<<< SEARCH") {
                state = State::Search;
                search.clear();
                replace.clear();
            } else if (marker == ">>>>>>> REPLACE") {
                throw ParseFailure("diff_malformed", "REPLACE marker without a SEARCH block");
            }
            break;
        case State::Search:
            if (marker == "=======")
                state = State::Replace;
            else if (marker == "<<<<<<< SEARCH" || marker == ">>>>>>> REPLACE")
                throw ParseFailure("diff_malformed", "SEARCH section is missing its ======= separator");
            else
                search.push_back(raw.substr(0, raw.size() - (raw.size() && raw.back() == '\r' ? 1 : 0)));
            break;
        case State::Replace:
            if (marker == ">>>>>>> REPLACE") {
                auto text = join(search);
                if (text.empty())
                    throw ParseFailure("diff_malformed", "empty SEARCH section");
                blocks.push_back({std::move(text), join(replace)});
                state = State::Outside;
            } else if (marker == "<<<<<<< SEARCH" || marker == "=======") {
                throw ParseFailure("diff_malformed", "REPLACE section is missing its >>>>>>> REPLACE marker");
            } else {
                replace.push_back(raw.substr(0, raw.size() - (raw.size() && raw.back() == '\r' ? 1 : 0)));
            }
            break;
        }
    }
    if (state != State::Outside)
        throw ParseFailure("diff_malformed", "unterminated SEARCH/REPLACE block");
    return blocks;
}

std::string apply_blocks(std::string source, const std::vector<DiffBlock>& blocks)
{
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        const auto n = count_occurrences(source, b.search);
        if (n == 0)
            throw ParseFailure("diff_not_found",
                               "block " + std::to_string(i + 1) + ": SEARCH text not found: " + preview(b.search));
        if (n > 1)
            throw ParseFailure("diff_ambiguous", "block " + std::to_string(i + 1) + ": SEARCH text occurs " +
                                                     std::to_string(n) + " times: " + preview(b.search));
        source.replace(source.find(b.search), b.search.size(), b.replace);
    }
    return source;
}

std::string apply_diff(std::string_view parent_source, std::string_view response)
{
    return apply_blocks(std::string(parent_source), parse_diff_blocks(response));
}

} // namespace evoforge::mutation
