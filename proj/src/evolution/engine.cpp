#include "evoforge/evolution/engine.hpp"

#include "evoforge/core/error.hpp"

#include <spdlog/spdlog.h>

#include <future>

namespace evoforge::evolution {

using json = nlohmann::json;

void to_json(json& j, const StepReport& r)
{
    j = json{{"step", r.step},
             {"inserted", r.inserted},
             {"accepted", r.accepted},
             {"replaced", r.replaced},
             {"discarded", r.discarded},
             {"offspring", r.offspring},
             {"mutation_failures", r.mutation_failures},
             {"failures_by_reason", r.failures_by_reason},
             {"migrated", r.migrated},
             {"best_fitness", r.best_fitness ? json(*r.best_fitness) : json(nullptr)}};
}

EvolutionEngine::EvolutionEngine(Archive archive, std::shared_ptr<store::ProgramStore> store,
                                 std::shared_ptr<mutation::ModelRouter> router,
                                 std::shared_ptr<ProgramFactory> factory, std::string task_description,
                                 EvolutionOptions options, std::uint64_t seed, ContextProvider contexts)
    : archive_(std::move(archive)), store_(std::move(store)), router_(std::move(router)),
      factory_(std::move(factory)), task_description_(std::move(task_description)), options_(std::move(options)),
      rng_(seed), contexts_(std::move(contexts))
{
    if (!store_ || !router_ || !factory_)
        throw ConfigError("evolution engine needs a store, a model router and a program factory");
    if (options_.parents_per_offspring == 0)
        throw ConfigError("parents_per_offspring must be positive");
    if (options_.mutation_threads == 0)
        throw ConfigError("mutation_threads must be positive");
    if (options_.prompt.schemas.empty())
        options_.prompt.schemas = archive_.schemas();
}

std::vector<std::size_t> EvolutionEngine::target_islands(const Program& program) const
{
    if (auto it = origin_.find(program.id); it != origin_.end())
        return {it->second};
    std::vector<std::size_t> all(archive_.islands().size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    return all;
}

std::size_t EvolutionEngine::drain(StepReport& report)
{
    auto [completed, next] = store_->poll_completed(cursor_);
    cursor_ = next;
    for (const auto& program : completed) {
        if (!program.metrics)
            continue;
        for (const auto& outcome : archive_.insert(program, target_islands(program))) {
            switch (outcome.kind) {
            case InsertKind::AcceptedNew:
                ++report.accepted;
                break;
            case InsertKind::Replaced:
                ++report.replaced;
                break;
            case InsertKind::Discarded:
                ++report.discarded;
                break;
            }
        }
        origin_.erase(program.id);
        ++report.inserted;
    }
    return completed.size();
}

std::optional<std::size_t> EvolutionEngine::pick_island(std::size_t slot) const
{
    const auto& islands = archive_.islands();
    for (std::size_t k = 0; k < islands.size(); ++k) {
        std::size_t idx = (slot + k) % islands.size();
        if (!islands[idx].empty())
            return idx;
    }
    return std::nullopt;
}

mutation::MutationContext EvolutionEngine::context_for(const Program& parent) const
{
    if (contexts_)
        if (auto ctx = contexts_(parent))
            return *ctx;
    mutation::MutationContext ctx;
    ctx.program_id = parent.id;
    ctx.source = parent.source;
    ctx.metrics = parent.metrics.value_or(Metrics{});
    return ctx;
}

StepReport EvolutionEngine::step()
{
    StepReport report;
    report.step = ++steps_;
    drain(report);

    if (options_.migration_interval > 0 && steps_ % options_.migration_interval == 0)
        report.migrated = archive_.migrate(options_.migration_top_k);

    struct Request {
        std::size_t island = 0;
        std::vector<Program> parents;
        std::vector<mutation::MutationContext> contexts;
        Rng rng;
    };
    std::vector<Request> requests;
    for (std::size_t j = 0; j < options_.batch; ++j) {
        auto island = pick_island(static_cast<std::size_t>((steps_ - 1) * options_.batch + j));
        if (!island)
            break;
        Request req{*island, {}, {}, Rng(0)};
        for (const auto& id : select_parents(archive_.islands()[*island], options_.parents_per_offspring, rng_,
                                             archive_.schemas()))
            req.parents.push_back(store_->get_required(id));
        req.rng = Rng(rng_.next());
        requests.push_back(std::move(req));
    }
    // Contexts are assembled sequentially: providers may run DAG stages.
    for (auto& req : requests)
        for (const auto& parent : req.parents)
            req.contexts.push_back(context_for(parent));

    auto run_one = [this](Request& req) {
        return mutation::mutate(req.parents, req.contexts, options_.mode, *router_, req.rng, task_description_,
                                options_.prompt);
    };
    std::vector<mutation::MutationResult> results(requests.size());
    if (options_.mutation_threads <= 1) {
        for (std::size_t j = 0; j < requests.size(); ++j)
            results[j] = run_one(requests[j]);
    } else {
        for (std::size_t start = 0; start < requests.size(); start += options_.mutation_threads) {
            std::size_t end = std::min(requests.size(), start + options_.mutation_threads);
            std::vector<std::future<mutation::MutationResult>> futures;
            for (std::size_t j = start; j < end; ++j)
                futures.push_back(std::async(std::launch::async, run_one, std::ref(requests[j])));
            for (std::size_t j = start; j < end; ++j)
                results[j] = futures[j - start].get();
        }
    }

    for (std::size_t j = 0; j < requests.size(); ++j) {
        auto& result = results[j];
        if (!result.ok()) {
            ++report.mutation_failures;
            ++report.failures_by_reason[result.failure->reason];
            ++failure_totals_[result.failure->reason];
            spdlog::debug("mutation failed: {} {}", result.failure->reason, result.failure->detail);
            continue;
        }
        auto child = factory_->make_child(std::move(*result.source), requests[j].parents);
        auto stored = store::insert_program(*store_, std::move(child));
        origin_[stored.id] = requests[j].island;
        report.new_programs.push_back(stored.id);
        ++report.offspring;
    }

    if (auto best = archive_.best()) {
        const auto& primary = primary_schema(archive_.schemas());
        report.best_fitness = best->metrics.at(primary.name);
    }
    return report;
}

} // namespace evoforge::evolution
