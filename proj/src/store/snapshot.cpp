#include "evoforge/store/snapshot.hpp"

#include "evoforge/store/kv_store.hpp"
#include "evoforge/store/resp.hpp"

#include <fstream>

namespace evoforge::store {

std::shared_ptr<ProgramStore> open_store(const StoreBackend& backend, const std::string& ns)
{
    if (const auto* kv = std::get_if<ExternalKvBackend>(&backend))
        return std::make_shared<KvProgramStore>(std::make_shared<RedisKv>(kv->address), ns);
    return std::make_shared<InMemoryStore>(ns);
}

nlohmann::json snapshot_store(ProgramStore& store)
{
    nlohmann::json programs = nlohmann::json::array();
    for (const auto& id : store.all_ids()) {
        if (auto p = store.get_program(id))
            programs.push_back(*p);
    }
    return {{"namespace", store.namespace_name()}, {"programs", std::move(programs)}};
}

void restore_store(InMemoryStore& store, const nlohmann::json& snapshot)
{
    for (const auto& doc : snapshot.at("programs"))
        store.restore(doc.get<Program>());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

} // namespace evoforge::store
