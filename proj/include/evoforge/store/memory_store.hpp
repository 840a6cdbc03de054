#pragma once

#include "evoforge/store/program_store.hpp"

#include <shared_mutex>
#include <unordered_map>

namespace evoforge::store {

/// Process-local backend. Reference semantics for the KV backend.
class InMemoryStore final : public ProgramStore {
public:
    explicit InMemoryStore(std::string ns = "default");

    WriteReceipt put_program(const Program& program, std::optional<std::uint64_t> expected_version) override;
    std::optional<Program> get_program(const ProgramId& id) override;
    std::vector<Program> descendants(const ProgramId& id) override;
    std::pair<std::vector<Program>, CompletionCursor> poll_completed(CompletionCursor after) override;
    std::vector<ProgramId> all_ids() override;
    std::string namespace_name() const override { return namespace_; }

    /// Loads a program verbatim (version included), bypassing the version
    /// check. Used to restore snapshots; completion feed entries are rebuilt
    /// for programs past COMPLETE.
    void restore(const Program& program);

private:
    void index_new(const Program& program);

    std::string namespace_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<ProgramId, Program> programs_;
    std::vector<ProgramId> order_;
    std::unordered_map<ProgramId, std::vector<ProgramId>> children_;
    std::vector<ProgramId> completed_;
};

} // namespace evoforge::store
