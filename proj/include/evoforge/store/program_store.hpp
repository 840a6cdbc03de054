#pragma once

#include "evoforge/core/error.hpp"
#include "evoforge/core/program.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evoforge::store {

/// Stored version differs from the writer's expectation; re-read and retry.
class VersionConflict : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class BackendUnavailable : public Error {
public:
    using Error::Error;
};

struct WriteReceipt {
    ProgramId id;
    std::uint64_t new_version = 0;
};

/// Position in the completion feed. Each consumer owns its cursor.
struct CompletionCursor {
    std::uint64_t position = 0;
    /// Wall-clock microseconds when a sequence gap was first seen (KV backend).
    std::int64_t gap_seen_at = 0;

    bool operator==(const CompletionCursor&) const = default;
};

inline constexpr CompletionCursor kCursorStart{};

/// Archive of every program of a run (or of several runs sharing a namespace).
///
/// All operations are thread-safe. Writes are optimistic: a write succeeds only
/// when the stored version equals `expected_version` (nullopt for the first
/// insert of an id) and bumps the version by one.
class ProgramStore {
public:
    virtual ~ProgramStore() = default;

    /// Throws VersionConflict, BackendUnavailable.
    virtual WriteReceipt put_program(const Program& program, std::optional<std::uint64_t> expected_version) = 0;

    /// Latest committed version, nullopt when unknown.
    virtual std::optional<Program> get_program(const ProgramId& id) = 0;

    /// Resolves parent_ids in order; parents missing from this namespace are
    /// skipped. Throws NotFound for an unknown id.
    virtual std::vector<Program> parents(const ProgramId& id);

    /// Direct children in insertion order. Throws NotFound for an unknown id.
    virtual std::vector<Program> descendants(const ProgramId& id) = 0;

    /// Programs that entered COMPLETE after `after`, in completion order.
    virtual std::pair<std::vector<Program>, CompletionCursor> poll_completed(CompletionCursor after) = 0;

    /// Every stored id in insertion order.
    virtual std::vector<ProgramId> all_ids() = 0;

    virtual std::string namespace_name() const = 0;

    Program get_required(const ProgramId& id);
};

/// Read-modify-write loop: re-reads on VersionConflict up to `max_attempts`
/// times. `mutate` may be called more than once. Returns the written program
/// with its new version.
Program update_program(ProgramStore& store, const ProgramId& id, const std::function<void(Program&)>& mutate,
                       int max_attempts = 16);

/// Inserts a brand-new program (expected version NONE) and returns it with
/// its stored version.
Program insert_program(ProgramStore& store, Program program);

} // namespace evoforge::store
