#include "evoforge/store/memory_store.hpp"

#include <mutex>

namespace evoforge::store {

InMemoryStore::InMemoryStore(std::string ns) : namespace_(std::move(ns)) {}

void InMemoryStore::index_new(const Program& program)
{
    order_.push_back(program.id);
    for (const auto& parent : program.parent_ids)
        children_[parent].push_back(program.id);
}

WriteReceipt InMemoryStore::put_program(const Program& program, std::optional<std::uint64_t> expected_version)
{
    std::unique_lock lock(mutex_);
    auto it = programs_.find(program.id);
    if (!expected_version) {
        if (it != programs_.end())
            throw VersionConflict("program " + program.id.str() + " already exists");
        Program stored = program;
        stored.version = 1;
        index_new(stored);
        if (stored.state == LifecycleState::Complete)
            completed_.push_back(stored.id);
        programs_.emplace(stored.id, std::move(stored));
        return {program.id, 1};
    }

    if (it == programs_.end())
        throw VersionConflict("program " + program.id.str() + " does not exist");
    if (it->second.version != *expected_version) {
        throw VersionConflict("program " + program.id.str() + ": expected version " +
                              std::to_string(*expected_version) + ", stored " + std::to_string(it->second.version));
    }
    bool entered_complete =
        program.state == LifecycleState::Complete && it->second.state != LifecycleState::Complete;
    Program stored = program;
    stored.version = *expected_version + 1;
    // Lineage is immutable after insert; keep the index consistent.
    stored.parent_ids = it->second.parent_ids;
    it->second = std::move(stored);
    if (entered_complete)
        completed_.push_back(program.id);
    return {program.id, *expected_version + 1};
}

std::optional<Program> InMemoryStore::get_program(const ProgramId& id)
{
    std::shared_lock lock(mutex_);
    auto it = programs_.find(id);
    if (it == programs_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Program> InMemoryStore::descendants(const ProgramId& id)
{
    std::shared_lock lock(mutex_);
    if (!programs_.contains(id))
        throw NotFound("unknown program " + id.str());
    std::vector<Program> out;
    if (auto it = children_.find(id); it != children_.end()) {
        out.reserve(it->second.size());
        for (const auto& child : it->second)
            out.push_back(programs_.at(child));
    }
    return out;
}

std::pair<std::vector<Program>, CompletionCursor> InMemoryStore::poll_completed(CompletionCursor after)
{
    std::shared_lock lock(mutex_);
    std::vector<Program> out;
    auto start = std::min<std::uint64_t>(after.position, completed_.size());
    for (auto i = start; i < completed_.size(); ++i)
        out.push_back(programs_.at(completed_[i]));
    return {std::move(out), CompletionCursor{completed_.size(), 0}};
}

std::vector<ProgramId> InMemoryStore::all_ids()
{
    std::shared_lock lock(mutex_);
    return order_;
}

void InMemoryStore::restore(const Program& program)
{
    std::unique_lock lock(mutex_);
    auto [it, inserted] = programs_.insert_or_assign(program.id, program);
    if (inserted) {
        index_new(program);
        if (program.state == LifecycleState::Complete)
            completed_.push_back(program.id);
    }
}

} // namespace evoforge::store
