#include "evoforge/problems/heilbronn.hpp"

#include <cmath>

namespace evoforge::problems {

namespace {

Metrics zero_area() { return Metrics{{"min_area", 0.0}}; }

} // namespace

ValidationReport heilbronn_validate(const PointSet& ps, std::size_t n_required)
{
    const auto& pts = ps.points;
    if (pts.size() != n_required)
        return invalid_report("cardinality",
                              "expected " + std::to_string(n_required) + " points, got " + std::to_string(pts.size()),
                              zero_area());
    for (const auto& p : pts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            return invalid_report("malformed", "non-finite coordinate", zero_area());
    }
    const auto tri = unit_triangle();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!inside_triangle(pts[i], tri))
            return invalid_report("containment", "point " + std::to_string(i) + " lies outside the unit triangle",
                                  zero_area());
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i] == pts[j])
                return invalid_report("duplicate",
                                      "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide",
                                      zero_area());
    const double area = n_required >= 3 ? min_triangle_area(ps) : 0.0;
    if (!(area > 0.0))
        return invalid_report("collinear", "three points are collinear", zero_area());
    return ValidationReport{Metrics{{std::string(kIsValid), 1.0}, {"min_area", area}}, {}, {}};
}

ValidationReport heilbronn_validate(const nlohmann::json& raw, std::size_t n_required)
{
    if (!raw.is_array())
        return invalid_report("malformed", "expected a list of [x, y] points", zero_area());
    PointSet ps;
    for (const auto& row : raw) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
            return invalid_report("malformed", "expected a list of [x, y] points", zero_area());
        ps.points.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    return heilbronn_validate(ps, n_required);
}

} // namespace evoforge::problems
