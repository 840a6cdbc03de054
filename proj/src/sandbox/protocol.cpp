#include "evoforge/sandbox/protocol.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>
#include <optional>

namespace evoforge::sandbox {

void ResourceLimits::validate() const
{
    if (wall_timeout.count() <= 0 || memory_cap == 0 || output_cap == 0)
        throw ConfigError("resource limits must all be positive");
}

std::string describe(const ExecutionOutcome& outcome)
{
    struct Visitor {
        std::string operator()(const Value&) const { return "ok"; }
        std::string operator()(const CandidateError& e) const
        {
            std::string out = e.type + ": " + e.message;
            if (!e.traceback.empty())
                out += "\n" + e.traceback;
            return out;
        }
        std::string operator()(const Timeout&) const { return "Timeout: wall-clock limit exceeded"; }
        std::string operator()(const ProtocolError& e) const { return "ProtocolError: " + e.detail; }
    };
    return std::visit(Visitor{}, outcome);
}

std::string encode_request(std::string_view source, ExecMode mode, const nlohmann::json& context,
                           std::string_view entry)
{
    nlohmann::json frame = {
        {"op", mode == ExecMode::ParseOnly ? "parse" : "run"},
        {"source", std::string(source)},
        {"context", context},
        {"entry", std::string(entry)},
    };
    // dump_json_exact escapes non-ASCII, so the frame is a single line.
    return dump_json_exact(frame) + "\n";
}

namespace {

using json = nlohmann::json;

class ExactDomParser : public nlohmann::detail::json_sax_dom_parser<json> {
public:
    using Base = nlohmann::detail::json_sax_dom_parser<json>;
    explicit ExactDomParser(json& root) : Base(root, true) {}

    bool number_float(json::number_float_t value, const json::string_t& literal)
    {
        bool integral = !literal.empty() &&
                        std::all_of(literal.begin() + (literal[0] == '-' ? 1 : 0), literal.end(),
                                    [](char c) { return c >= '0' && c <= '9'; });
        if (!integral)
            return Base::number_float(value, literal);
        Base::start_object(1);
        json::string_t key = "$bigint";
        Base::key(key);
        json::string_t digits = literal;
        Base::string(digits);
        return Base::end_object();
    }
};

bool is_bigint(const json& v)
{
    return v.is_object() && v.size() == 1 && v.contains("$bigint") && v["$bigint"].is_string();
}

void dump_exact(const json& v, std::string& out)
{
    if (is_bigint(v)) {
        out += v["$bigint"].get_ref<const std::string&>();
    } else if (v.is_array()) {
        out.push_back('[');
        bool first = true;
        for (const auto& e : v) {
            if (!first)
                out.push_back(',');
            first = false;
            dump_exact(e, out);
        }
        out.push_back(']');
    } else if (v.is_object()) {
        out.push_back('{');
        bool first = true;
        for (const auto& [k, e] : v.items()) {
            if (!first)
                out.push_back(',');
            first = false;
            out += json(k).dump(-1, ' ', true, json::error_handler_t::replace);
            out.push_back(':');
            dump_exact(e, out);
        }
        out.push_back('}');
    } else {
        out += v.dump(-1, ' ', true, json::error_handler_t::replace);
    }
}

ProtocolError protocol_error(std::string detail)
{
    return ProtocolError{std::move(detail)};
}

} // namespace

json parse_json_exact(std::string_view text)
{
    json root;
    ExactDomParser sax(root);
    json::sax_parse(text.begin(), text.end(), &sax);
    return root;
}

std::string dump_json_exact(const json& value)
{
    std::string out;
    dump_exact(value, out);
    return out;
}

ExecutionOutcome decode_response(std::string_view frame)
{
    while (!frame.empty() && (frame.back() == '\n' || frame.back() == '\r'))
        frame.remove_suffix(1);
    if (frame.empty())
        return protocol_error("empty response frame");
    if (frame.find('\n') != std::string_view::npos)
        return protocol_error("multiple response frames");

    json doc;
    try {
        doc = parse_json_exact(frame);
    } catch (const json::exception& e) {
        return protocol_error(std::string("malformed response frame: ") + e.what());
    }
    if (!doc.is_object())
        return protocol_error("response frame is not an object");
    bool has_value = doc.contains("value");
    bool has_error = doc.contains("error");
    if (has_value && has_error)
        return protocol_error("ambiguous response: both value and error present");
    auto ok_it = doc.find("ok");
    if (ok_it == doc.end() || !ok_it->is_boolean())
        return protocol_error("response frame lacks boolean 'ok'");

    if (ok_it->get<bool>()) {
        if (!has_value)
            return protocol_error("ok response without value");
        return Value{doc["value"]};
    }
    if (!has_error || !doc["error"].is_object())
        return protocol_error("error response without error object");
    const auto& err = doc["error"];
    auto field = [&](const char* name) -> std::optional<std::string> {
        auto it = err.find(name);
        if (it == err.end() || !it->is_string())
            return std::nullopt;
        return it->get<std::string>();
    };
    auto type = field("type");
    auto message = field("message");
    auto traceback = field("traceback");
    if (!type || !message || !traceback)
        return protocol_error("error object must carry string type, message and traceback");
    return CandidateError{*type, *message, *traceback};
}

std::string sanitize_utf8(std::string_view bytes)
{
    std::string out;
    out.reserve(bytes.size());
    const auto* s = reinterpret_cast<const unsigned char*>(bytes.data());
    std::size_t n = bytes.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char c = s[i];
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        }
        bool valid = len != 0 && i + len <= n;
        for (std::size_t k = 1; valid && k < len; ++k) {
            if ((s[i + k] & 0xC0) != 0x80)
                valid = false;
            else
                cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        if (valid) {
            // Reject overlongs, surrogates and out-of-range code points.
            static constexpr std::uint32_t min_cp[] = {0, 0, 0x80, 0x800, 0x10000};
            valid = cp >= min_cp[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
        }
        if (valid) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out += "\xEF\xBF\xBD";
            ++i;
        }
    }
    return out;
}

} // namespace evoforge::sandbox
