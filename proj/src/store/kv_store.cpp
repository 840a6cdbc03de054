#include "evoforge/store/kv_store.hpp"

#include <chrono>

namespace evoforge::store {

namespace {

std::int64_t wall_micros()
{
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Program decode(const std::string& text)
{
    try {
        return nlohmann::json::parse(text).get<Program>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendUnavailable(std::string("corrupt program document: ") + e.what());
    }
}

} // namespace

KvProgramStore::KvProgramStore(std::shared_ptr<KvClient> kv, std::string ns, std::chrono::milliseconds gap_timeout)
    : kv_(std::move(kv)), namespace_(std::move(ns)), gap_timeout_(gap_timeout)
{
}

std::string KvProgramStore::program_key(const ProgramId& id) const
{
    return namespace_ + ":program:" + id.str();
}

std::string KvProgramStore::children_key(const ProgramId& id) const
{
    return namespace_ + ":children:" + id.str();
}

std::string KvProgramStore::completed_key() const
{
    return namespace_ + ":completed";
}

WriteReceipt KvProgramStore::put_program(const Program& program, std::optional<std::uint64_t> expected_version)
{
    const auto key = program_key(program.id);
    Program stored = program;
    std::optional<std::string> expected_text;
    bool entered_complete = false;

    if (expected_version) {
        expected_text = kv_->get(key);
        if (!expected_text)
            throw VersionConflict("program " + program.id.str() + " does not exist");
        Program current = decode(*expected_text);
        if (current.version != *expected_version) {
            throw VersionConflict("program " + program.id.str() + ": expected version " +
                                  std::to_string(*expected_version) + ", stored " + std::to_string(current.version));
        }
        stored.version = *expected_version + 1;
        stored.parent_ids = current.parent_ids;
        entered_complete = stored.state == LifecycleState::Complete && current.state != LifecycleState::Complete;
    } else {
        stored.version = 1;
        entered_complete = stored.state == LifecycleState::Complete;
    }

    if (!kv_->compare_and_swap(key, expected_text, nlohmann::json(stored).dump()))
        throw VersionConflict("concurrent write to program " + program.id.str());

    if (!expected_version) {
        kv_->list_push(namespace_ + ":programs", program.id.str());
        for (const auto& parent : stored.parent_ids)
            kv_->list_push(children_key(parent), program.id.str());
    }
    if (entered_complete) {
        auto seq = kv_->increment(completed_key() + ":seq");
        kv_->sorted_add(completed_key(), static_cast<double>(seq), program.id.str());
    }
    return {program.id, stored.version};
}

std::optional<Program> KvProgramStore::get_program(const ProgramId& id)
{
    auto text = kv_->get(program_key(id));
    if (!text)
        return std::nullopt;
    return decode(*text);
}

std::vector<Program> KvProgramStore::descendants(const ProgramId& id)
{
    if (!kv_->get(program_key(id)))
        throw NotFound("unknown program " + id.str());
    std::vector<Program> out;
    for (const auto& child : kv_->list_range(children_key(id))) {
        if (auto p = get_program(Uuid::parse(child)))
            out.push_back(std::move(*p));
    }
    return out;
}

std::pair<std::vector<Program>, CompletionCursor> KvProgramStore::poll_completed(CompletionCursor after)
{
    auto entries = kv_->sorted_range_after(completed_key(), static_cast<double>(after.position));
    CompletionCursor cursor = after;
    std::vector<Program> out;
    for (const auto& [member, score] : entries) {
        auto seq = static_cast<std::uint64_t>(score);
        if (seq != cursor.position + 1) {
            auto now = wall_micros();
            if (cursor.gap_seen_at == 0) {
                cursor.gap_seen_at = now;
                break;
            }
            if (now - cursor.gap_seen_at < gap_timeout_.count() * 1000)
                break;
        }
        if (auto p = get_program(Uuid::parse(member)))
            out.push_back(std::move(*p));
        cursor.position = seq;
        cursor.gap_seen_at = 0;
    }
    return {std::move(out), cursor};
}

std::vector<ProgramId> KvProgramStore::all_ids()
{
    std::vector<ProgramId> out;
    for (const auto& s : kv_->list_range(namespace_ + ":programs"))
        out.push_back(Uuid::parse(s));
    return out;
}

} // namespace evoforge::store
