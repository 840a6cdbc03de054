#include "evoforge/problems/toy.hpp"

#include <cmath>

namespace evoforge::problems {

ValidationReport toy_quadratic_validate(const nlohmann::json& raw, double target)
{
    if (!raw.is_number())
        return invalid_report("malformed", "expected a single number", Metrics{{"score", 0.0}});
    const double x = raw.get<double>();
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
        return invalid_report("range", "x must lie in [0, 1]", Metrics{{"score", 0.0}});
    const double d = x - target;
    return ValidationReport{Metrics{{std::string(kIsValid), 1.0}, {"score", 1.0 - d * d}}, {}, {}};
}

} // namespace evoforge::problems
