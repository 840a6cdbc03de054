#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace evoforge::problems {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

struct PointSet {
    std::vector<Point2> points;
};

/// Equilateral triangle of area 1 with apex at the origin and a horizontal
/// base below it: A = (0, 0), B = (-s/2, -h), C = (s/2, -h), s = 2 * 3^(-1/4),
/// h = 2 / s.
std::array<Point2, 3> unit_triangle();

/// |cross(b - a, c - a)| / 2.
double triangle_area(Point2 a, Point2 b, Point2 c);

/// Smallest area over all C(n, 3) triples. Throws evoforge::Error when n < 3.
double min_triangle_area(const PointSet& ps);

/// Inside-or-on test via three half-plane sign checks with absolute slack.
bool inside_triangle(Point2 p, const std::array<Point2, 3>& tri, double slack = 1e-12);

} // namespace evoforge::problems
