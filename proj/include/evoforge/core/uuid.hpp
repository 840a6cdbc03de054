#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace evoforge {

/// RFC 4122 version-4 identifier. Generated from a caller-supplied engine so
/// that seeded runs produce reproducible ids.
class Uuid {
public:
    Uuid() = default;

    static Uuid generate(std::mt19937_64& engine);

    /// Parses the canonical 8-4-4-4-12 hex form. Throws evoforge::Error.
    static Uuid parse(std::string_view text);

    std::string str() const;
    bool is_nil() const;

    auto operator<=>(const Uuid&) const = default;

    const std::array<std::uint8_t, 16>& bytes() const { return bytes_; }

private:
    std::array<std::uint8_t, 16> bytes_{};
};

using ProgramId = Uuid;

} // namespace evoforge

template <>
struct std::hash<evoforge::Uuid> {
    std::size_t operator()(const evoforge::Uuid& id) const noexcept
    {
        std::size_t h = 1469598103934665603ULL;
        for (auto b : id.bytes()) {
            h ^= b;
            h *= 1099511628211ULL;
        }
        return h;
    }
};
