#pragma once

#include "evoforge/evolution/behavior_space.hpp"
#include "evoforge/store/program_store.hpp"

#include <map>
#include <memory>

namespace evoforge::evolution {

enum class InsertKind { AcceptedNew, Replaced, Discarded };

std::string_view to_string(InsertKind k);

struct InsertOutcome {
    InsertKind kind = InsertKind::Discarded;
    BehaviorCell cell;
    std::optional<ProgramId> evicted; ///< Replaced only
    std::string reason;               ///< Discarded only: "tie", "worse", "occupant"
};

struct Elite {
    ProgramId id;
    Metrics metrics;
};

/// One MAP-Elites archive. Decisions only; lifecycle persistence is done by
/// Archive so that an elite shared by several islands stays EVOLVING while
/// it occupies any cell.
class Island {
public:
    Island(std::string id, BehaviorSpaceSpec space, std::uint64_t rng_seed = 0);

    const std::string& id() const { return id_; }
    const BehaviorSpaceSpec& space() const { return space_; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    const std::map<BehaviorCell, Elite>& cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }
    bool contains(const ProgramId& id) const;

    /// Places `program` if its cell is empty or it significantly improves on
    /// the occupant's primary metric. Requires metrics.
    InsertOutcome offer(const Program& program, std::span<const MetricSchema> schemas);

    /// Unconditional placement, for snapshot restore.
    void place(const BehaviorCell& cell, Elite elite);

    /// Elites ordered best first by direction-normalized primary metric,
    /// ties by id.
    std::vector<Elite> ranked(std::span<const MetricSchema> schemas) const;

private:
    std::string id_;
    BehaviorSpaceSpec space_;
    std::uint64_t rng_seed_;
    std::map<BehaviorCell, Elite> cells_;
};

/// Islands plus the store that holds their elites' lifecycle state.
class Archive {
public:
    Archive(std::vector<Island> islands, std::shared_ptr<store::ProgramStore> store,
            std::vector<MetricSchema> schemas);

    /// Offers a COMPLETE (or, for migration, EVOLVING) program to the given
    /// islands and persists the resulting transitions: placed programs become
    /// EVOLVING, evicted elites that no longer occupy any cell and COMPLETE
    /// programs placed nowhere become DISCARDED.
    std::vector<InsertOutcome> insert(const Program& program, const std::vector<std::size_t>& island_indices);

    /// Sends each island's top_k elites to the next island in the ring.
    /// Migrant lists are taken before any insert. Returns accepted count.
    std::size_t migrate(std::size_t top_k);

    std::vector<Island>& islands() { return islands_; }
    const std::vector<Island>& islands() const { return islands_; }
    const std::vector<MetricSchema>& schemas() const { return schemas_; }

    /// Every occupant id across islands, sorted.
    std::vector<ProgramId> occupants() const;
    bool occupies_any(const ProgramId& id) const;

    /// Best elite by primary metric over all islands, valid elites first.
    std::optional<Elite> best() const;

    /// {"islands":[{"id","rng_seed","space","cells":[{"cell","elite","metrics"}]}]}
    nlohmann::json snapshot() const;

    /// Rebuilds islands from a snapshot (no store writes).
    static std::vector<Island> islands_from_snapshot(const nlohmann::json& doc);

private:
    void set_state(const ProgramId& id, LifecycleState from, LifecycleState to);

    std::vector<Island> islands_;
    std::shared_ptr<store::ProgramStore> store_;
    std::vector<MetricSchema> schemas_;
};

} // namespace evoforge::evolution
