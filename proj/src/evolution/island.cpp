#include "evoforge/evolution/island.hpp"

#include "evoforge/core/error.hpp"

#include <algorithm>
#include <set>

namespace evoforge::evolution {

using json = nlohmann::json;

namespace {

bool valid_metrics(const Metrics& m)
{
    auto it = m.find(kIsValid);
    return it != m.end() && it->second == 1.0;
}

} // namespace

std::string_view to_string(InsertKind k)
{
    switch (k) {
    case InsertKind::AcceptedNew:
        return "accepted_new";
    case InsertKind::Replaced:
        return "replaced";
    case InsertKind::Discarded:
        return "discarded";
    }
    return "discarded";
}

Island::Island(std::string id, BehaviorSpaceSpec space, std::uint64_t rng_seed)
    : id_(std::move(id)), space_(std::move(space)), rng_seed_(rng_seed)
{
}

bool Island::contains(const ProgramId& id) const
{
    return std::any_of(cells_.begin(), cells_.end(), [&](const auto& kv) { return kv.second.id == id; });
}

InsertOutcome Island::offer(const Program& program, std::span<const MetricSchema> schemas)
{
    if (!program.metrics)
        throw Error("program " + program.id.str() + " has no metrics");
    InsertOutcome out;
    out.cell = map_to_cell(*program.metrics, space_, schemas);
    auto it = cells_.find(out.cell);
    if (it == cells_.end()) {
        cells_.emplace(out.cell, Elite{program.id, *program.metrics});
        out.kind = InsertKind::AcceptedNew;
        return out;
    }
    if (it->second.id == program.id) {
        out.reason = "occupant";
        return out;
    }
    const auto& primary = primary_schema(schemas);
    double candidate = program.metrics->at(primary.name);
    double incumbent = it->second.metrics.at(primary.name);
    if (is_significant_improvement(candidate, incumbent, primary)) {
        out.kind = InsertKind::Replaced;
        out.evicted = it->second.id;
        it->second = Elite{program.id, *program.metrics};
        return out;
    }
    out.reason = candidate == incumbent ? "tie" : "worse";
    return out;
}

void Island::place(const BehaviorCell& cell, Elite elite)
{
    cells_[cell] = std::move(elite);
}

std::vector<Elite> Island::ranked(std::span<const MetricSchema> schemas) const
{
    const auto& primary = primary_schema(schemas);
    std::vector<Elite> out;
    for (const auto& [_, e] : cells_)
        out.push_back(e);
    auto key = [&](const Elite& e) {
        bool valid = valid_metrics(e.metrics);
        double v = e.metrics.at(primary.name);
        return std::pair{valid, primary.higher_is_better ? v : -v};
    };
    std::stable_sort(out.begin(), out.end(), [&](const Elite& a, const Elite& b) {
        auto ka = key(a), kb = key(b);
        if (ka != kb)
            return ka > kb;
        return a.id < b.id;
    });
    return out;
}

Archive::Archive(std::vector<Island> islands, std::shared_ptr<store::ProgramStore> store,
                 std::vector<MetricSchema> schemas)
    : islands_(std::move(islands)), store_(std::move(store)), schemas_(std::move(schemas))
{
    if (islands_.empty())
        throw ConfigError("archive needs at least one island");
    validate_schema_set(schemas_);
    for (const auto& island : islands_)
        island.space().validate(schemas_);
}

void Archive::set_state(const ProgramId& id, LifecycleState from, LifecycleState to)
{
    store::update_program(*store_, id, [&](Program& p) {
        if (p.state == from)
            p = lifecycle_transition(std::move(p), to);
    });
}

std::vector<InsertOutcome> Archive::insert(const Program& program, const std::vector<std::size_t>& island_indices)
{
    std::vector<InsertOutcome> outcomes;
    std::vector<ProgramId> evicted;
    bool placed = false;
    for (auto idx : island_indices) {
        auto outcome = islands_.at(idx).offer(program, schemas_);
        placed = placed || outcome.kind != InsertKind::Discarded;
        if (outcome.evicted)
            evicted.push_back(*outcome.evicted);
        outcomes.push_back(std::move(outcome));
    }
    if (placed)
        set_state(program.id, LifecycleState::Complete, LifecycleState::Evolving);
    else if (!occupies_any(program.id))
        set_state(program.id, LifecycleState::Complete, LifecycleState::Discarded);
    for (const auto& id : evicted)
        if (!occupies_any(id))
            set_state(id, LifecycleState::Evolving, LifecycleState::Discarded);
    return outcomes;
}

std::size_t Archive::migrate(std::size_t top_k)
{
    if (islands_.size() < 2 || top_k == 0)
        return 0;
    std::vector<std::vector<Elite>> migrants;
    for (const auto& island : islands_) {
        auto ranked = island.ranked(schemas_);
        if (ranked.size() > top_k)
            ranked.resize(top_k);
        migrants.push_back(std::move(ranked));
    }
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < islands_.size(); ++i) {
        const std::size_t target = (i + 1) % islands_.size();
        for (const auto& e : migrants[i]) {
            auto program = store_->get_required(e.id);
            for (const auto& o : insert(program, {target}))
                accepted += o.kind != InsertKind::Discarded;
        }
    }
    return accepted;
}

std::vector<ProgramId> Archive::occupants() const
{
    std::set<ProgramId> ids;
    for (const auto& island : islands_)
        for (const auto& [_, e] : island.cells())
            ids.insert(e.id);
    return {ids.begin(), ids.end()};
}

bool Archive::occupies_any(const ProgramId& id) const
{
    return std::any_of(islands_.begin(), islands_.end(), [&](const Island& i) { return i.contains(id); });
}

std::optional<Elite> Archive::best() const
{
    std::vector<Elite> tops;
    for (const auto& island : islands_) {
        auto ranked = island.ranked(schemas_);
        if (!ranked.empty())
            tops.push_back(ranked.front());
    }
    if (tops.empty())
        return std::nullopt;
    const auto& primary = primary_schema(schemas_);
    std::stable_sort(tops.begin(), tops.end(), [&](const Elite& a, const Elite& b) {
        bool va = valid_metrics(a.metrics), vb = valid_metrics(b.metrics);
        if (va != vb)
            return va;
        double da = a.metrics.at(primary.name), db = b.metrics.at(primary.name);
        if (da != db)
            return primary.higher_is_better ? da > db : da < db;
        return a.id < b.id;
    });
    return tops.front();
}

json Archive::snapshot() const
{
    json islands = json::array();
    for (const auto& island : islands_) {
        json cells = json::array();
        for (const auto& [cell, e] : island.cells())
            cells.push_back(json{{"cell", cell.key()}, {"elite", e.id.str()}, {"metrics", e.metrics}});
        islands.push_back(json{{"id", island.id()},
                               {"rng_seed", island.rng_seed()},
                               {"space", island.space()},
                               {"cells", std::move(cells)}});
    }
    return json{{"islands", std::move(islands)}};
}

std::vector<Island> Archive::islands_from_snapshot(const json& doc)
{
    std::vector<Island> out;
    for (const auto& j : doc.at("islands")) {
        Island island(j.at("id").get<std::string>(), j.at("space").get<BehaviorSpaceSpec>(),
                      j.value("rng_seed", std::uint64_t{0}));
        for (const auto& c : j.at("cells")) {
            BehaviorCell cell;
            std::string key = c.at("cell").get<std::string>();
            std::size_t pos = 0;
            while (pos <= key.size() && !key.empty()) {
                auto comma = key.find(',', pos);
                cell.coords.push_back(static_cast<std::uint32_t>(std::stoul(key.substr(pos, comma - pos))));
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            island.place(cell, Elite{Uuid::parse(c.at("elite").get<std::string>()), c.at("metrics").get<Metrics>()});
        }
        out.push_back(std::move(island));
    }
    return out;
}

} // namespace evoforge::evolution
