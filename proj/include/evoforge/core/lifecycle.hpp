#pragma once

#include <array>
#include <string_view>

namespace evoforge {

enum class LifecycleState { Fresh, Running, Complete, Evolving, Discarded, Failed };

inline constexpr std::array<LifecycleState, 6> all_lifecycle_states = {
    LifecycleState::Fresh,    LifecycleState::Running,   LifecycleState::Complete,
    LifecycleState::Evolving, LifecycleState::Discarded, LifecycleState::Failed,
};

/// FRESH->RUNNING, RUNNING->{COMPLETE,FAILED}, COMPLETE->{EVOLVING,DISCARDED},
/// EVOLVING->DISCARDED. Everything else is rejected.
bool is_legal_transition(LifecycleState from, LifecycleState to);

std::string_view to_string(LifecycleState state);

/// Inverse of to_string (upper-case names). Throws evoforge::Error.
LifecycleState lifecycle_from_string(std::string_view name);

} // namespace evoforge
