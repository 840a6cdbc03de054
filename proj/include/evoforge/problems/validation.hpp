#pragma once

#include "evoforge/core/metric_schema.hpp"
#include "evoforge/core/program.hpp"

#include <string>

namespace evoforge::problems {

/// Validator output. `reason` is empty for valid results and otherwise a
/// short machine-readable tag ("cardinality", "containment", ...), with
/// `detail` carrying the human-readable diagnostic.
struct ValidationReport {
    Metrics metrics;
    std::string reason;
    std::string detail;

    bool valid() const { return reason.empty(); }
};

ValidationReport invalid_report(std::string reason, std::string detail, Metrics metrics = {});

} // namespace evoforge::problems
