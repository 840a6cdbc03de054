#pragma once

#include "evoforge/core/program.hpp"
#include "evoforge/core/random.hpp"

#include <atomic>
#include <mutex>
#include <span>

namespace evoforge {

/// Mints new Program records with reproducible ids and timestamps.
///
/// With `logical_clock` set, created_at is a strictly increasing counter so
/// that seeded runs serialize identically.
class ProgramFactory {
public:
    explicit ProgramFactory(std::uint64_t seed, bool logical_clock = false);

    Program make_seed(std::string source);

    /// generation = max(parent generations) + 1.
    Program make_child(std::string source, std::span<const Program> parents);

    ProgramId next_id();
    std::int64_t now();

private:
    std::mutex mutex_;
    Rng rng_;
    bool logical_clock_;
    std::int64_t tick_ = 0;
};

} // namespace evoforge
