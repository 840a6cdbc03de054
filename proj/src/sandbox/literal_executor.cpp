#include "evoforge/sandbox/literal_executor.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/sandbox/protocol.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace evoforge::sandbox {

namespace {

using json = nlohmann::json;

class LiteralParser {
public:
    explicit LiteralParser(std::string_view text) : s_(text) {}

    json parse_all()
    {
        auto v = parse_value();
        skip_ws();
        if (pos_ != s_.size())
            fail("trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error("invalid literal at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool consume(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    json parse_sequence(char close)
    {
        json arr = json::array();
        while (true) {
            skip_ws();
            if (consume(close))
                return arr;
            arr.push_back(parse_value());
            if (consume(','))
                continue;
            if (consume(close))
                return arr;
            fail(std::string("expected ',' or '") + close + "'");
        }
    }

    json parse_dict()
    {
        json obj = json::object();
        while (true) {
            if (consume('}'))
                return obj;
            auto key = parse_value();
            if (!key.is_string())
                fail("dict keys must be strings");
            if (!consume(':'))
                fail("expected ':'");
            obj[key.get<std::string>()] = parse_value();
            if (consume(','))
                continue;
            if (consume('}'))
                return obj;
            fail("expected ',' or '}'");
        }
    }

    json parse_string()
    {
        char quote = s_[pos_++];
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != quote) {
            char c = s_[pos_++];
            if (c == '\\' && pos_ < s_.size()) {
                char e = s_[pos_++];
                switch (e) {
                case 'n':
                    out.push_back('\n');
                    break;
                case 't':
                    out.push_back('\t');
                    break;
                default:
                    out.push_back(e);
                }
            } else {
                out.push_back(c);
            }
        }
        if (pos_ >= s_.size())
            fail("unterminated string");
        ++pos_;
        return out;
    }

    json parse_number()
    {
        std::size_t start = pos_;
        if (s_[pos_] == '-' || s_[pos_] == '+')
            ++pos_;
        bool is_float = false;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
                ++pos_;
            } else if (c == '.' || c == 'e' || c == 'E') {
                is_float = true;
                ++pos_;
                if ((c == 'e' || c == 'E') && pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
                    ++pos_;
            } else {
                break;
            }
        }
        std::string literal;
        for (auto c : s_.substr(start, pos_ - start)) {
            if (c != '_' && c != '+')
                literal.push_back(c);
        }
        if (literal.empty() || literal == "-")
            fail("malformed number");
        // Python allows "1." and ".5"; JSON does not.
        if (auto dot = literal.find('.'); is_float && dot != std::string::npos) {
            if (dot + 1 == literal.size() || !std::isdigit(static_cast<unsigned char>(literal[dot + 1])))
                literal.insert(dot + 1, "0");
            if (dot == 0 || literal[dot - 1] == '-')
                literal.insert(dot, "0");
        }
        try {
            return parse_json_exact(literal);
        } catch (const json::exception&) {
            fail("malformed number '" + literal + "'");
        }
    }

    json parse_value()
    {
        skip_ws();
        if (pos_ >= s_.size())
            fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '[') {
            ++pos_;
            return parse_sequence(']');
        }
        if (c == '(') {
            ++pos_;
            return parse_sequence(')');
        }
        if (c == '{') {
            ++pos_;
            return parse_dict();
        }
        if (c == '"' || c == '\'')
            return parse_string();
        if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
            return parse_number();
        for (auto [word, value] : {std::pair<std::string_view, json>{"True", true},
                                   std::pair<std::string_view, json>{"False", false},
                                   std::pair<std::string_view, json>{"None", nullptr}}) {
            if (s_.substr(pos_, word.size()) == word) {
                pos_ += word.size();
                return value;
            }
        }
        fail("unsupported expression");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

struct Line {
    std::size_t indent;
    std::string text; // stripped
};

std::vector<Line> split_lines(std::string_view source)
{
    std::vector<Line> out;
    std::istringstream in{std::string(source)};
    std::string raw;
    while (std::getline(in, raw)) {
        std::size_t indent = 0;
        while (indent < raw.size() && (raw[indent] == ' ' || raw[indent] == '\t'))
            ++indent;
        std::string text = raw.substr(indent);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
            text.pop_back();
        out.push_back({indent, std::move(text)});
    }
    return out;
}

/// Returns a syntax diagnostic or nullopt when brackets and quotes balance.
std::optional<std::string> check_balance(std::string_view source)
{
    std::vector<char> stack;
    char quote = 0;
    bool comment = false;
    int line = 1;
    for (std::size_t i = 0; i < source.size(); ++i) {
        char c = source[i];
        if (c == '\n') {
            ++line;
            comment = false;
            if (quote)
                return "SyntaxError: unterminated string literal (line " + std::to_string(line - 1) + ")";
            continue;
        }
        if (comment)
            continue;
        if (quote) {
            if (c == '\\')
                ++i;
            else if (c == quote)
                quote = 0;
            continue;
        }
        switch (c) {
        case '#':
            comment = true;
            break;
        case '"':
        case '\'':
            quote = c;
            break;
        case '(':
        case '[':
        case '{':
            stack.push_back(c);
            break;
        case ')':
        case ']':
        case '}': {
            char open = c == ')' ? '(' : c == ']' ? '[' : '{';
            if (stack.empty() || stack.back() != open)
                return "SyntaxError: unmatched '" + std::string(1, c) + "' (line " + std::to_string(line) + ")";
            stack.pop_back();
            break;
        }
        default:
            break;
        }
    }
    if (quote)
        return std::string("SyntaxError: unterminated string literal");
    if (!stack.empty())
        return "SyntaxError: '" + std::string(1, stack.back()) + "' was never closed";
    return std::nullopt;
}

struct Entrypoint {
    std::size_t def_line;
    std::optional<std::string> param;
};

std::optional<Entrypoint> find_entrypoint(const std::vector<Line>& lines, const std::string& entry)
{
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& t = lines[i].text;
        if (lines[i].indent != 0 || t.rfind("def " + entry + "(", 0) != 0)
            continue;
        auto close = t.find(')');
        if (close == std::string::npos || t.find(':', close) == std::string::npos)
            continue;
        auto open = entry.size() + 5;
        std::string params = t.substr(open, close - open);
        Entrypoint ep{i, std::nullopt};
        auto end = params.find_first_of(":=,");
        std::string first = params.substr(0, end);
        while (!first.empty() && std::isspace(static_cast<unsigned char>(first.back())))
            first.pop_back();
        while (!first.empty() && std::isspace(static_cast<unsigned char>(first.front())))
            first.erase(first.begin());
        if (!first.empty())
            ep.param = first;
        return ep;
    }
    return std::nullopt;
}

bool balanced(const std::string& expr)
{
    int depth = 0;
    for (char c : expr) {
        if (c == '(' || c == '[' || c == '{')
            ++depth;
        else if (c == ')' || c == ']' || c == '}')
            --depth;
    }
    return depth <= 0;
}

} // namespace

json parse_python_literal(std::string_view text)
{
    return LiteralParser(text).parse_all();
}

ExecutionResult LiteralExecutor::execute(std::string_view source, ExecMode mode, const json& context,
                                         const ResourceLimits&, std::string_view entry)
{
    ExecutionResult result{Value{nullptr}, {}, {}, {}, 0};
    if (auto diag = check_balance(source)) {
        auto colon = diag->find(':');
        result.outcome = CandidateError{diag->substr(0, colon), diag->substr(colon + 2), *diag};
        return result;
    }
    auto lines = split_lines(source);
    auto ep = find_entrypoint(lines, std::string(entry));
    if (!ep) {
        result.outcome = CandidateError{"MissingEntrypoint", "missing " + std::string(entry), ""};
        return result;
    }
    if (mode == ExecMode::ParseOnly)
        return result;

    for (std::size_t i = ep->def_line + 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.text.empty() || line.text.front() == '#')
            continue;
        if (line.indent == 0)
            break;
        const auto& t = line.text;
        if (t == "while True:" || t.rfind("while True:", 0) == 0) {
            result.outcome = Timeout{};
            return result;
        }
        if (t.rfind("raise ", 0) == 0) {
            std::string rest = t.substr(6);
            auto paren = rest.find('(');
            std::string type = rest.substr(0, paren);
            std::string message;
            if (paren != std::string::npos) {
                try {
                    auto args = parse_python_literal(rest.substr(paren));
                    if (args.is_string())
                        message = args.get<std::string>();
                    else if (args.is_array() && !args.empty() && args[0].is_string())
                        message = args[0].get<std::string>();
                } catch (const Error&) {
                }
            }
            result.outcome = CandidateError{type, message,
                                            "Traceback (most recent call last):\n  File \"<candidate>\", line " +
                                                std::to_string(i + 1) + ", in entrypoint\n" + type + ": " + message};
            return result;
        }
        if (t == "return") {
            result.outcome = Value{nullptr};
            return result;
        }
        if (t.rfind("return ", 0) == 0) {
            std::string expr = t.substr(7);
            for (std::size_t j = i + 1; !balanced(expr) && j < lines.size(); ++j)
                expr += "\n" + lines[j].text;
            if (ep->param && expr == *ep->param) {
                result.outcome = Value{context};
                return result;
            }
            try {
                result.outcome = Value{parse_python_literal(expr)};
            } catch (const Error& e) {
                result.outcome = CandidateError{"UnsupportedExpression", e.what(), ""};
            }
            return result;
        }
    }
    result.outcome = Value{nullptr};
    return result;
}

} // namespace evoforge::sandbox
