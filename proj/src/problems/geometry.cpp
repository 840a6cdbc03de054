#include "evoforge/problems/geometry.hpp"

#include "evoforge/core/error.hpp"

#include <cmath>
#include <limits>

namespace evoforge::problems {

std::array<Point2, 3> unit_triangle()
{
    const double s = 2.0 * std::pow(3.0, -0.25);
    const double h = 2.0 / s;
    return {Point2{0.0, 0.0}, Point2{-s / 2.0, -h}, Point2{s / 2.0, -h}};
}

double triangle_area(Point2 a, Point2 b, Point2 c)
{
    return std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)) / 2.0;
}

double min_triangle_area(const PointSet& ps)
{
    const auto& p = ps.points;
    const std::size_t n = p.size();
    if (n < 3)
        throw Error("min_triangle_area needs at least 3 points, got " + std::to_string(n));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                best = std::min(best, triangle_area(p[i], p[j], p[k]));
    return best;
}

bool inside_triangle(Point2 p, const std::array<Point2, 3>& tri, double slack)
{
    auto cross = [](Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    const double orient = cross(tri[0], tri[1], tri[2]) >= 0 ? 1.0 : -1.0;
    for (int e = 0; e < 3; ++e) {
        const Point2 a = tri[e];
        const Point2 b = tri[(e + 1) % 3];
        if (orient * cross(a, b, p) < -slack)
            return false;
    }
    return true;
}

} // namespace evoforge::problems
