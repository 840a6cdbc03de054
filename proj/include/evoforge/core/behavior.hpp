#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace evoforge {

/// Coordinates of one MAP-Elites cell, one entry per behavior dimension.
struct BehaviorCell {
    std::vector<std::uint32_t> coords;

    auto operator<=>(const BehaviorCell&) const = default;

    /// "3,1" style key used in snapshots.
    std::string key() const
    {
        std::string out;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (i)
                out.push_back(',');
            out += std::to_string(coords[i]);
        }
        return out;
    }
};

} // namespace evoforge
