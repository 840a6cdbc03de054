#include "evoforge/problems/validation.hpp"

namespace evoforge::problems {

ValidationReport invalid_report(std::string reason, std::string detail, Metrics metrics)
{
    metrics[std::string(kIsValid)] = 0.0;
    return ValidationReport{std::move(metrics), std::move(reason), std::move(detail)};
}

} // namespace evoforge::problems
