#pragma once

#include "evoforge/problems/validation.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include <optional>
#include <vector>

namespace evoforge::problems {

using BigInt = boost::multiprecision::cpp_int;

struct IntegerVectorSet {
    std::vector<std::vector<BigInt>> vectors;
};

/// Metrics {is_valid, num_vectors}. Valid iff all vectors share one
/// dimension (and `dimension` when given), have a common squared norm
/// r^2 > 0, are pairwise distinct, and every pairwise squared distance is at
/// least r^2. Exact at any magnitude.
ValidationReport kissing_validate(const IntegerVectorSet& set, std::optional<std::size_t> dimension = std::nullopt);

/// raw: list of integer lists. Entries may be JSON integers or
/// {"$bigint": "<digits>"} tags; floats make the set invalid.
ValidationReport kissing_validate(const nlohmann::json& raw, std::optional<std::size_t> dimension = std::nullopt);

/// JSON for an integer, tagging values outside the int64 range.
nlohmann::json bigint_to_json(const BigInt& v);

} // namespace evoforge::problems
