#include "evoforge/problems/circle_packing.hpp"

#include <cmath>

namespace evoforge::problems {

namespace {

Metrics zero_sum() { return Metrics{{"sum_radii", 0.0}}; }

} // namespace

ValidationReport circle_packing_validate(const CirclePacking& packing, std::size_t n_required, double tolerance)
{
    const auto& c = packing.circles;
    if (c.size() != n_required)
        return invalid_report("cardinality",
                              "expected " + std::to_string(n_required) + " circles, got " + std::to_string(c.size()),
                              zero_sum());
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& ci = c[i];
        if (!std::isfinite(ci.cx) || !std::isfinite(ci.cy) || !std::isfinite(ci.r))
            return invalid_report("malformed", "non-finite value in circle " + std::to_string(i), zero_sum());
        if (!(ci.r > 0.0))
            return invalid_report("radius", "circle " + std::to_string(i) + " has non-positive radius", zero_sum());
        const bool inside = ci.cx >= ci.r - tolerance && ci.cx <= 1.0 - ci.r + tolerance &&
                            ci.cy >= ci.r - tolerance && ci.cy <= 1.0 - ci.r + tolerance;
        if (!inside)
            return invalid_report("containment", "circle " + std::to_string(i) + " leaves the unit square",
                                  zero_sum());
        sum += ci.r;
    }
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            const double dx = c[i].cx - c[j].cx;
            const double dy = c[i].cy - c[j].cy;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < c[i].r + c[j].r - tolerance)
                return invalid_report("overlap",
                                      "circles " + std::to_string(i) + " and " + std::to_string(j) + " overlap",
                                      zero_sum());
        }
    return ValidationReport{Metrics{{std::string(kIsValid), 1.0}, {"sum_radii", sum}}, {}, {}};
}

ValidationReport circle_packing_validate(const nlohmann::json& raw, std::size_t n_required, double tolerance)
{
    if (!raw.is_array())
        return invalid_report("malformed", "expected a list of [cx, cy, r]", zero_sum());
    CirclePacking packing;
    for (const auto& row : raw) {
        if (!row.is_array() || row.size() != 3 || !row[0].is_number() || !row[1].is_number() ||
            !row[2].is_number())
            return invalid_report("malformed", "expected a list of [cx, cy, r]", zero_sum());
        packing.circles.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    return circle_packing_validate(packing, n_required, tolerance);
}

} // namespace evoforge::problems
