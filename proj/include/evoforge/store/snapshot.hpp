#pragma once

#include "evoforge/store/memory_store.hpp"

#include <filesystem>
#include <memory>
#include <variant>

namespace evoforge::store {

struct InMemoryBackend {};

struct ExternalKvBackend {
    std::string address; ///< host:port
};

using StoreBackend = std::variant<InMemoryBackend, ExternalKvBackend>;

std::shared_ptr<ProgramStore> open_store(const StoreBackend& backend, const std::string& ns);

/// {"namespace": ..., "programs": [...]} with programs in insertion order.
nlohmann::json snapshot_store(ProgramStore& store);

/// Loads a snapshot document into an in-memory store.
void restore_store(InMemoryStore& store, const nlohmann::json& snapshot);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace evoforge::store
