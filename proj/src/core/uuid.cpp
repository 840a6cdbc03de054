#include "evoforge/core/uuid.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>

namespace evoforge {

Uuid Uuid::generate(std::mt19937_64& engine)
{
    Uuid id;
    std::uint64_t hi = engine();
    std::uint64_t lo = engine();
    for (int i = 0; i < 8; ++i) {
        id.bytes_[i] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
        id.bytes_[8 + i] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
    }
    id.bytes_[6] = static_cast<std::uint8_t>((id.bytes_[6] & 0x0F) | 0x40);
    id.bytes_[8] = static_cast<std::uint8_t>((id.bytes_[8] & 0x3F) | 0x80);
    return id;
}

namespace {

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

Uuid Uuid::parse(std::string_view text)
{
    if (text.size() != 36 || text[8] != '-' || text[13] != '-' || text[18] != '-' || text[23] != '-')
        throw Error("malformed uuid: " + std::string(text));
    Uuid id;
    std::size_t out = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '-') {
            ++i;
            continue;
        }
        int a = hex_value(text[i]);
        int b = hex_value(text[i + 1]);
        if (a < 0 || b < 0)
            throw Error("malformed uuid: " + std::string(text));
        id.bytes_[out++] = static_cast<std::uint8_t>(a * 16 + b);
        i += 2;
    }
    return id;
}

std::string Uuid::str() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(36);
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
        if (i == 4 || i == 6 || i == 8 || i == 10)
            out.push_back('-');
        out.push_back(digits[bytes_[i] >> 4]);
        out.push_back(digits[bytes_[i] & 0x0F]);
    }
    return out;
}

bool Uuid::is_nil() const
{
    return std::all_of(bytes_.begin(), bytes_.end(), [](auto b) { return b == 0; });
}

} // namespace evoforge
