#include "evoforge/core/program_factory.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>
#include <chrono>

namespace evoforge {

ProgramFactory::ProgramFactory(std::uint64_t seed, bool logical_clock)
    : rng_(seed), logical_clock_(logical_clock)
{
}

ProgramId ProgramFactory::next_id()
{
    std::lock_guard lock(mutex_);
    return Uuid::generate(rng_.engine());
}

std::int64_t ProgramFactory::now()
{
    std::lock_guard lock(mutex_);
    if (logical_clock_)
        return ++tick_;
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                  std::chrono::system_clock::now().time_since_epoch())
                  .count();
    // Keep timestamps strictly increasing even within one clock tick.
    tick_ = std::max<std::int64_t>(tick_ + 1, us);
    return tick_;
}

Program ProgramFactory::make_seed(std::string source)
{
    Program p;
    p.id = next_id();
    p.source = std::move(source);
    p.created_at = now();
    return p;
}

Program ProgramFactory::make_child(std::string source, std::span<const Program> parents)
{
    if (parents.empty())
        throw Error("make_child requires at least one parent");
    Program p;
    p.id = next_id();
    p.source = std::move(source);
    std::uint32_t gen = 0;
    for (const auto& parent : parents) {
        p.parent_ids.push_back(parent.id);
        gen = std::max(gen, parent.generation);
    }
    p.generation = gen + 1;
    p.created_at = now();
    return p;
}

} // namespace evoforge
