#include "evoforge/problems/kissing.hpp"

#include <limits>

namespace evoforge::problems {

namespace {

using json = nlohmann::json;

Metrics no_vectors() { return Metrics{{"num_vectors", 0.0}}; }

std::optional<BigInt> parse_entry(const json& v)
{
    if (v.is_number_integer())
        return v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
    if (v.is_object() && v.size() == 1 && v.contains("$bigint") && v["$bigint"].is_string()) {
        const auto& digits = v["$bigint"].get_ref<const std::string&>();
        std::size_t start = !digits.empty() && digits[0] == '-' ? 1 : 0;
        if (start == digits.size())
            return std::nullopt;
        for (std::size_t i = start; i < digits.size(); ++i)
            if (digits[i] < '0' || digits[i] > '9')
                return std::nullopt;
        return BigInt(digits);
    }
    return std::nullopt;
}

} // namespace

ValidationReport kissing_validate(const IntegerVectorSet& set, std::optional<std::size_t> dimension)
{
    const auto& v = set.vectors;
    if (v.empty())
        return invalid_report("empty", "no vectors", no_vectors());
    const std::size_t dim = v.front().size();
    if (dim == 0)
        return invalid_report("dimension", "zero-dimensional vectors", no_vectors());
    if (dimension && dim != *dimension)
        return invalid_report("dimension",
                              "expected dimension " + std::to_string(*dimension) + ", got " + std::to_string(dim),
                              no_vectors());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].size() != dim)
            return invalid_report("dimension", "vector " + std::to_string(i) + " has a different dimension",
                                  no_vectors());

    auto sq_norm = [&](const std::vector<BigInt>& x) {
        BigInt s = 0;
        for (const auto& e : x)
            s += e * e;
        return s;
    };
    const BigInt r2 = sq_norm(v.front());
    if (r2 == 0)
        return invalid_report("zero", "vector 0 is zero", no_vectors());
    for (std::size_t i = 1; i < v.size(); ++i)
        if (sq_norm(v[i]) != r2)
            return invalid_report("shell", "vector " + std::to_string(i) + " is off the common shell", no_vectors());

    BigInt d2, diff;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            d2 = 0;
            for (std::size_t k = 0; k < dim; ++k) {
                diff = v[i][k] - v[j][k];
                d2 += diff * diff;
            }
            if (d2 == 0)
                return invalid_report("duplicate",
                                      "vectors " + std::to_string(i) + " and " + std::to_string(j) + " coincide",
                                      no_vectors());
            if (d2 < r2)
                return invalid_report("separation",
                                      "vectors " + std::to_string(i) + " and " + std::to_string(j) +
                                          " are closer than the shell radius",
                                      no_vectors());
        }
    return ValidationReport{
        Metrics{{std::string(kIsValid), 1.0}, {"num_vectors", static_cast<double>(v.size())}}, {}, {}};
}

ValidationReport kissing_validate(const json& raw, std::optional<std::size_t> dimension)
{
    if (!raw.is_array())
        return invalid_report("malformed", "expected a list of integer vectors", no_vectors());
    IntegerVectorSet set;
    set.vectors.reserve(raw.size());
    for (const auto& row : raw) {
        if (!row.is_array())
            return invalid_report("malformed", "expected a list of integer vectors", no_vectors());
        std::vector<BigInt> vec;
        vec.reserve(row.size());
        for (const auto& e : row) {
            auto x = parse_entry(e);
            if (!x)
                return invalid_report("non_integer", "entry " + e.dump() + " is not an integer", no_vectors());
            vec.push_back(std::move(*x));
        }
        set.vectors.push_back(std::move(vec));
    }
    return kissing_validate(set, dimension);
}

json bigint_to_json(const BigInt& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return json{{"$bigint", v.str()}};
}

} // namespace evoforge::problems
