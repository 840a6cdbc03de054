#include "evoforge/store/resp.hpp"

#include "evoforge/store/program_store.hpp"

#include <charconv>

namespace evoforge::store {

std::string resp_encode(const std::vector<std::string>& args)
{
    std::string out = "*" + std::to_string(args.size()) + "\r\n";
    for (const auto& a : args) {
        out += "$" + std::to_string(a.size()) + "\r\n";
        out += a;
        out += "\r\n";
    }
    return out;
}

namespace {

std::optional<std::pair<std::string_view, std::size_t>> read_line(std::string_view buf, std::size_t pos)
{
    auto end = buf.find("\r\n", pos);
    if (end == std::string_view::npos)
        return std::nullopt;
    return std::make_pair(buf.substr(pos, end - pos), end + 2);
}

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw BackendUnavailable("malformed RESP integer: " + std::string(s));
    return v;
}

std::optional<std::pair<RespValue, std::size_t>> decode_at(std::string_view buf, std::size_t pos)
{
    if (pos >= buf.size())
        return std::nullopt;
    char tag = buf[pos];
    auto line = read_line(buf, pos + 1);
    if (!line)
        return std::nullopt;
    auto [body, next] = *line;
    RespValue v;
    switch (tag) {
    case '+':
        v.kind = RespValue::Kind::Simple;
        v.text = std::string(body);
        return std::make_pair(std::move(v), next);
    case '-':
        v.kind = RespValue::Kind::Error;
        v.text = std::string(body);
        return std::make_pair(std::move(v), next);
    case ':':
        v.kind = RespValue::Kind::Integer;
        v.integer = parse_int(body);
        return std::make_pair(std::move(v), next);
    case '$': {
        auto len = parse_int(body);
        if (len < 0)
            return std::make_pair(RespValue{}, next);
        auto ulen = static_cast<std::size_t>(len);
        if (buf.size() < next + ulen + 2)
            return std::nullopt;
        if (buf.substr(next + ulen, 2) != "\r\n")
            throw BackendUnavailable("malformed RESP bulk string terminator");
        v.kind = RespValue::Kind::Bulk;
        v.text = std::string(buf.substr(next, ulen));
        return std::make_pair(std::move(v), next + ulen + 2);
    }
    case '*': {
        auto count = parse_int(body);
        if (count < 0)
            return std::make_pair(RespValue{}, next);
        v.kind = RespValue::Kind::Array;
        std::size_t cur = next;
        for (std::int64_t i = 0; i < count; ++i) {
            auto elem = decode_at(buf, cur);
            if (!elem)
                return std::nullopt;
            v.elements.push_back(std::move(elem->first));
            cur = elem->second;
        }
        return std::make_pair(std::move(v), cur);
    }
    default:
        throw BackendUnavailable(std::string("unknown RESP type byte '") + tag + "'");
    }
}

} // namespace

std::optional<std::pair<RespValue, std::size_t>> resp_decode(std::string_view buffer)
{
    return decode_at(buffer, 0);
}

} // namespace evoforge::store
