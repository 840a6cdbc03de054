#include "evoforge/orchestrator/run.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/sandbox/literal_executor.hpp"
#include "evoforge/sandbox/subprocess_executor.hpp"
#include "evoforge/stages/evaluator.hpp"
#include "evoforge/stages/registry.hpp"

#include <spdlog/spdlog.h>

#include <fstream>

namespace evoforge::orchestrator {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::shared_ptr<mutation::MockClient> mock_from(mutation::StageKind kind, const json& entry, std::size_t index)
{
    mutation::ModelRoute route;
    route.stage_kind = kind;
    route.model_id = entry.value("model_id", "mock-" + std::string(mutation::to_string(kind)) +
                                                 (index ? "-" + std::to_string(index) : std::string()));
    route.endpoint = "mock";
    route.weight = entry.value("weight", 1.0);
    route.validate();
    return mutation::MockClient::from_json(route, entry.contains("script") ? entry["script"] : entry);
}

std::string render_number(double v)
{
    return json(v).dump();
}

/// Elites of an archive document with their metrics, best first.
std::vector<json> ranked_cells(const json& archive, const std::vector<MetricSchema>& schemas)
{
    const auto& primary = primary_schema(schemas);
    std::vector<json> cells;
    for (const auto& island : archive.at("islands"))
        for (const auto& c : island.at("cells")) {
            json cell = c;
            cell["island"] = island.at("id");
            cells.push_back(std::move(cell));
        }
    auto key = [&](const json& c) {
        const auto& m = c.at("metrics");
        bool valid = m.value(std::string(kIsValid), 0.0) == 1.0;
        double v = m.value(primary.name, worst_value(primary));
        return std::pair{valid, primary.higher_is_better ? v : -v};
    };
    std::stable_sort(cells.begin(), cells.end(), [&](const json& a, const json& b) {
        auto ka = key(a), kb = key(b);
        if (ka != kb)
            return ka > kb;
        return a.at("elite").get<std::string>() < b.at("elite").get<std::string>();
    });
    return cells;
}

std::vector<evolution::Island> make_islands(const RunConfig& config, const problems::ProblemContext& problem)
{
    std::vector<evolution::Island> islands;
    auto default_space = evolution::fitness_validity_space(problem.schemas, config.algorithm.bins);
    if (config.algorithm.kind == "single_island") {
        islands.emplace_back("main", default_space, config.execution.seed);
        return islands;
    }
    std::uint64_t n = 0;
    for (const auto& ic : config.algorithm.islands) {
        auto space = ic.space.dims.empty() ? default_space : ic.space;
        if (ic.space.dims.empty())
            space.validity_dim = ic.space.validity_dim;
        islands.emplace_back(ic.id, space, config.execution.seed + ++n);
    }
    return islands;
}

} // namespace

std::shared_ptr<mutation::ModelRouter> build_router(const LlmConfig& config, std::optional<std::size_t> call_budget)
{
    std::vector<std::shared_ptr<mutation::LlmClient>> clients;
    if (config.kind == "mock") {
        if (!config.mock_script.empty()) {
            json script;
            try {
                std::ifstream in(config.mock_script);
                script = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(config.mock_script.string() + ": " + e.what());
            }
            for (auto kind : {mutation::StageKind::Mutation, mutation::StageKind::Insights,
                              mutation::StageKind::Lineage}) {
                auto name = std::string(mutation::to_string(kind));
                if (!script.contains(name))
                    continue;
                const auto& entry = script[name];
                if (entry.is_array()) {
                    for (std::size_t i = 0; i < entry.size(); ++i)
                        clients.push_back(mock_from(kind, entry[i], i));
                } else {
                    clients.push_back(mock_from(kind, entry, 0));
                }
            }
        }
    } else {
        mutation::HttpOptions options;
        options.api_key_env = config.api_key_env;
        for (const auto& route : config.routes)
            clients.push_back(std::make_shared<mutation::HttpClient>(route, options));
    }
    return std::make_shared<mutation::ModelRouter>(std::move(clients), config.retry, config.max_in_flight,
                                                   call_budget);
}

RunResult run_evolution(const RunConfig& config, const RunHooks& hooks)
{
    validate_run_config(config);
    auto problem = std::make_shared<const problems::ProblemContext>(
        problems::load_problem(config.problem_dir, config.seed_namespace));

    std::vector<std::string> seeds = problem->initial_programs;
    if (!config.seed_from.empty())
        seeds = elite_sources(store::read_json_file(config.seed_from));
    else if (problem->seed_namespace)
        seeds = elite_sources(export_archive(config.runs_dir, *problem->seed_namespace));
    if (seeds.empty())
        throw ConfigError("no seed programs to start from");

    auto store = store::open_store(config.store, config.namespace_name);
    if (!store->all_ids().empty())
        throw ConfigError("namespace '" + config.namespace_name + "' already holds programs");

    std::shared_ptr<sandbox::Executor> executor = hooks.executor;
    if (!executor) {
        if (config.execution.executor == "literal")
            executor = std::make_shared<sandbox::LiteralExecutor>();
        else
            executor = std::make_shared<sandbox::SubprocessExecutor>(config.execution.interpreter);
    }
    auto router = hooks.router ? hooks.router : build_router(config.llm, config.budget.max_llm_calls);

    auto services = std::make_shared<stages::StageServices>();
    services->store = store;
    services->executor = executor;
    services->limits = config.execution.limits;
    services->problem = problem;
    services->router = router;
    services->seed = config.execution.seed;
    services->lineage = config.lineage;
    services->caps = config.caps;
    services->max_insights = config.max_insights;

    auto stage_map = stages::StageRegistry::with_builtins().build(config.dag, services);
    auto engine = std::make_shared<dag::DagEngine>(
        config.dag, std::move(stage_map), store,
        dag::EngineOptions{config.execution.max_programs, config.execution.max_stages});
    stages::ProgramEvaluator evaluator(engine, services);
    auto factory = std::make_shared<ProgramFactory>(config.execution.seed, config.execution.single_threaded);

    std::vector<ProgramId> seed_ids;
    for (const auto& source : seeds)
        seed_ids.push_back(store::insert_program(*store, factory->make_seed(source)).id);
    evaluator.evaluate_batch(seed_ids);

    evolution::Archive archive(make_islands(config, *problem), store, problem->schemas);
    evolution::EvolutionOptions options;
    options.batch = config.algorithm.batch;
    options.parents_per_offspring = config.algorithm.parents_per_offspring;
    options.migration_interval = config.algorithm.kind == "multi_island" ? config.algorithm.migration_interval : 0;
    options.migration_top_k = config.algorithm.migration_top_k;
    options.mode = mutation::mutation_mode_from_string(config.algorithm.mutation_mode);
    options.prompt.schemas = problem->schemas;
    options.prompt.max_prompt_chars = config.max_prompt_chars;
    options.mutation_threads = config.execution.mutation_threads;
    evolution::EvolutionEngine evo(
        std::move(archive), store, router, factory, problem->task_description, options, config.execution.seed,
        [&evaluator](const Program& p) { return evaluator.refresh_context(p.id); });

    json series = json::array();
    std::map<std::string, std::size_t> failures;
    auto record = [&](std::size_t generation, const evolution::StepReport& r) {
        json row{{"generation", generation},
                 {"best_fitness", r.best_fitness ? json(*r.best_fitness) : json(nullptr)},
                 {"offspring", r.offspring},
                 {"mutation_failures", r.mutation_failures},
                 {"accepted", r.accepted},
                 {"replaced", r.replaced},
                 {"discarded", r.discarded},
                 {"migrated", r.migrated}};
        series.push_back(std::move(row));
    };
    auto refresh_best = [&](evolution::StepReport& r) {
        if (auto best = evo.archive().best())
            r.best_fitness = best->metrics.at(problem->primary().name);
    };

    evolution::StepReport initial;
    evo.drain(initial);
    refresh_best(initial);
    record(0, initial);

    std::string stopped_by = "generations";
    std::size_t generations = 0;
    for (std::size_t g = 1; g <= config.budget.max_generations; ++g) {
        if (router->budget_exhausted()) {
            stopped_by = "llm_budget";
            break;
        }
        auto rep = evo.step();
        evaluator.evaluate_batch(rep.new_programs);
        evolution::StepReport tail;
        evo.drain(tail);
        rep.inserted += tail.inserted;
        rep.accepted += tail.accepted;
        rep.replaced += tail.replaced;
        rep.discarded += tail.discarded;
        refresh_best(rep);
        for (const auto& [reason, n] : rep.failures_by_reason)
            failures[reason] += n;
        record(g, rep);
        generations = g;
        spdlog::info("generation {}: offspring {}, best {}", g, rep.offspring,
                     rep.best_fitness ? render_number(*rep.best_fitness) : "n/a");
        if (hooks.on_generation)
            hooks.on_generation(rep);
    }
    if (stopped_by == "generations" && generations < config.budget.max_generations)
        stopped_by = "llm_budget";

    std::map<std::string, std::size_t> by_state;
    std::size_t total = 0;
    for (const auto& id : store->all_ids()) {
        ++by_state[std::string(to_string(store->get_required(id).state))];
        ++total;
    }
    std::size_t failure_total = 0;
    for (const auto& [_, n] : failures)
        failure_total += n;

    json best = nullptr;
    if (auto elite = evo.archive().best()) {
        auto p = store->get_required(elite->id);
        best = json{{"id", p.id.str()},
                    {"fitness", elite->metrics.at(problem->primary().name)},
                    {"metrics", elite->metrics},
                    {"generation", p.generation},
                    {"source", p.source}};
    }
    json islands = json::array();
    for (const auto& island : evo.archive().islands())
        islands.push_back(json{{"id", island.id()}, {"occupied_cells", island.cells().size()}});

    RunResult result;
    result.router = router;
    result.store = store;
    result.report = json{{"namespace", config.namespace_name},
                         {"problem", problem->name},
                         {"profile", config.profile},
                         {"seed", config.execution.seed},
                         {"generations_completed", generations},
                         {"stopped_by", stopped_by},
                         {"programs", {{"total", total}, {"by_state", by_state}}},
                         {"best", best},
                         {"archive", {{"islands", islands}, {"elites", evo.archive().occupants().size()}}},
                         {"llm_calls", router->calls()},
                         {"llm_failed_calls", router->failed_calls()},
                         {"mutation_failures", {{"total", failure_total}, {"by_reason", failures}}},
                         {"fitness_series", series}};

    result.archive = evo.archive().snapshot();
    result.archive["namespace"] = config.namespace_name;
    result.archive["schemas"] = problem->schemas;

    result.output_dir = config.runs_dir / config.namespace_name;
    fs::create_directories(result.output_dir);
    store::write_json_file(result.output_dir / "report.json", result.report);
    store::write_json_file(result.output_dir / "archive.json", result.archive);
    store::write_json_file(result.output_dir / "store.json", store::snapshot_store(*store));
    std::ofstream csv(result.output_dir / "fitness.csv", std::ios::binary);
    csv << "generation,best_fitness,offspring,mutation_failures\n";
    for (const auto& row : series)
        csv << row["generation"].get<std::size_t>() << ','
            << (row["best_fitness"].is_null() ? std::string() : row["best_fitness"].dump()) << ','
            << row["offspring"].get<std::size_t>() << ',' << row["mutation_failures"].get<std::size_t>() << '\n';
    return result;
}

json export_archive(const fs::path& runs_dir, const std::string& ns)
{
    const auto dir = runs_dir / ns;
    if (!fs::exists(dir / "archive.json"))
        throw ConfigError("unknown namespace '" + ns + "' (no " + (dir / "archive.json").string() + ")");
    json archive = store::read_json_file(dir / "archive.json");
    json programs = json::array();
    if (fs::exists(dir / "store.json"))
        programs = store::read_json_file(dir / "store.json").value("programs", json::array());
    std::map<std::string, const json*> by_id;
    for (const auto& p : programs)
        by_id[p.at("id").get<std::string>()] = &p;

    auto schemas = archive.at("schemas").get<std::vector<MetricSchema>>();
    json elites = json::array();
    for (auto& cell : ranked_cells(archive, schemas)) {
        auto id = cell.at("elite").get<std::string>();
        auto it = by_id.find(id);
        elites.push_back(json{{"id", id},
                              {"island", cell.at("island")},
                              {"cell", cell.at("cell")},
                              {"metrics", cell.at("metrics")},
                              {"source", it == by_id.end() ? json(nullptr) : it->second->at("source")}});
    }
    json lineage = json::array();
    for (const auto& p : programs)
        for (const auto& parent : p.value("parent_ids", json::array()))
            lineage.push_back(json{{"parent", parent}, {"child", p.at("id")}});

    return json{{"namespace", ns},
                {"schemas", archive.at("schemas")},
                {"islands", archive.at("islands")},
                {"elites", std::move(elites)},
                {"lineage", std::move(lineage)}};
}

void export_to_file(const fs::path& runs_dir, const std::string& ns, const fs::path& path)
{
    auto doc = export_archive(runs_dir, ns);
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    store::write_json_file(path, doc);
}

std::vector<std::string> elite_sources(const json& exported)
{
    std::vector<std::string> out;
    if (!exported.contains("elites"))
        throw ConfigError("export document has no 'elites' list");
    for (const auto& e : exported["elites"]) {
        if (!e.contains("source") || !e["source"].is_string())
            continue;
        auto src = e["source"].get<std::string>();
        if (std::find(out.begin(), out.end(), src) == out.end())
            out.push_back(std::move(src));
    }
    return out;
}

} // namespace evoforge::orchestrator
