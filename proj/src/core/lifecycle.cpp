#include "evoforge/core/lifecycle.hpp"

#include "evoforge/core/error.hpp"

#include <string>

namespace evoforge {

bool is_legal_transition(LifecycleState from, LifecycleState to)
{
    using S = LifecycleState;
    switch (from) {
    case S::Fresh:
        return to == S::Running;
    case S::Running:
        return to == S::Complete || to == S::Failed;
    case S::Complete:
        return to == S::Evolving || to == S::Discarded;
    case S::Evolving:
        return to == S::Discarded;
    case S::Discarded:
    case S::Failed:
        return false;
    }
    return false;
}

std::string_view to_string(LifecycleState state)
{
    switch (state) {
    case LifecycleState::Fresh:
        return "FRESH";
    case LifecycleState::Running:
        return "RUNNING";
    case LifecycleState::Complete:
        return "COMPLETE";
    case LifecycleState::Evolving:
        return "EVOLVING";
    case LifecycleState::Discarded:
        return "DISCARDED";
    case LifecycleState::Failed:
        return "FAILED";
    }
    return "UNKNOWN";
}

LifecycleState lifecycle_from_string(std::string_view name)
{
    for (auto state : all_lifecycle_states) {
        if (to_string(state) == name)
            return state;
    }
    throw Error("unknown lifecycle state: " + std::string(name));
}

} // namespace evoforge
