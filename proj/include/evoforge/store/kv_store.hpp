#pragma once

#include "evoforge/store/kv_client.hpp"
#include "evoforge/store/program_store.hpp"

#include <chrono>
#include <memory>

namespace evoforge::store {

/// ProgramStore over any KvClient. Key layout:
///
///   {ns}:program:{id}      JSON document (core-model serialization)
///   {ns}:children:{id}     list of child ids, insertion order
///   {ns}:programs          list of all ids, insertion order
///   {ns}:completed         sorted index id -> completion sequence number
///   {ns}:completed:seq     counter feeding the sorted index
///
/// Completion sequence numbers come from INCR and are added right after the
/// counter bump, so a poller may briefly observe a gap. The cursor stops at
/// the first gap and skips it once it has been outstanding for `gap_timeout`.
class KvProgramStore final : public ProgramStore {
public:
    KvProgramStore(std::shared_ptr<KvClient> kv, std::string ns,
                   std::chrono::milliseconds gap_timeout = std::chrono::milliseconds(2000));

    WriteReceipt put_program(const Program& program, std::optional<std::uint64_t> expected_version) override;
    std::optional<Program> get_program(const ProgramId& id) override;
    std::vector<Program> descendants(const ProgramId& id) override;
    std::pair<std::vector<Program>, CompletionCursor> poll_completed(CompletionCursor after) override;
    std::vector<ProgramId> all_ids() override;
    std::string namespace_name() const override { return namespace_; }

    std::string program_key(const ProgramId& id) const;
    std::string children_key(const ProgramId& id) const;
    std::string completed_key() const;

private:
    std::shared_ptr<KvClient> kv_;
    std::string namespace_;
    std::chrono::milliseconds gap_timeout_;
};

} // namespace evoforge::store
