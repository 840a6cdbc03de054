#include "evoforge/store/program_store.hpp"

namespace evoforge::store {

std::vector<Program> ProgramStore::parents(const ProgramId& id)
{
    auto child = get_program(id);
    if (!child)
        throw NotFound("unknown program " + id.str());
    std::vector<Program> out;
    out.reserve(child->parent_ids.size());
    for (const auto& pid : child->parent_ids) {
        if (auto parent = get_program(pid))
            out.push_back(std::move(*parent));
    }
    return out;
}

Program ProgramStore::get_required(const ProgramId& id)
{
    auto p = get_program(id);
    if (!p)
        throw NotFound("unknown program " + id.str());
    return std::move(*p);
}

Program update_program(ProgramStore& store, const ProgramId& id, const std::function<void(Program&)>& mutate,
                       int max_attempts)
{
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Program current = store.get_required(id);
        std::uint64_t expected = current.version;
        mutate(current);
        try {
            auto receipt = store.put_program(current, expected);
            current.version = receipt.new_version;
            return current;
        } catch (const VersionConflict&) {
            continue;
        }
    }
    throw VersionConflict("gave up updating " + id.str() + " after " + std::to_string(max_attempts) + " conflicts");
}

Program insert_program(ProgramStore& store, Program program)
{
    auto receipt = store.put_program(program, std::nullopt);
    program.version = receipt.new_version;
    return program;
}

} // namespace evoforge::store
