#include "evoforge/core/error.hpp"
#include "evoforge/evolution/behavior_space.hpp"
#include "evoforge/evolution/engine.hpp"
#include "evoforge/evolution/island.hpp"
#include "evoforge/evolution/selection.hpp"
#include "evoforge/mutation/llm_client.hpp"
#include "evoforge/mutation/parsing.hpp"
#include "evoforge/mutation/router.hpp"

#include "../support/test_support.hpp"

#include <doctest.h>

using namespace evoforge;
using namespace evoforge::evolution;
using evoforge::testing::complete_program;
using nlohmann::json;

namespace {

Metrics scored(double score, double valid = 1.0, double loc = 10.0)
{
    return Metrics{{"score", score}, {"is_valid", valid}, {"loc", loc}};
}

struct ArchiveFixture {
    std::shared_ptr<store::InMemoryStore> store = std::make_shared<store::InMemoryStore>("evo");
    ProgramFactory factory{21, true};
    std::vector<MetricSchema> schemas;

    explicit ArchiveFixture(std::vector<MetricSchema> s = testing::score_schemas()) : schemas(std::move(s)) {}

    Archive archive(std::size_t n_islands = 1)
    {
        std::vector<Island> islands;
        for (std::size_t i = 0; i < n_islands; ++i)
            islands.emplace_back("island" + std::to_string(i), fitness_validity_space(schemas), i);
        return Archive(std::move(islands), store, schemas);
    }

    Program complete(Metrics m) { return complete_program(*store, factory, std::move(m)); }
    LifecycleState state(const Program& p) { return store->get_required(p.id).state; }
};

} // namespace

TEST_SUITE("evolution")
{
    TEST_CASE("cells from metrics")
    {
        auto schemas = testing::score_schemas();
        auto space = fitness_validity_space(schemas);
        CHECK(map_to_cell(scored(0.5), space, schemas).coords == std::vector<std::uint32_t>{8, 1});
        CHECK(map_to_cell(scored(0.5, 0.0), space, schemas).coords.back() == 0);
        CHECK(map_to_cell(scored(1.0), space, schemas).coords[0] == 15);

        BehaviorSpaceSpec two{{{"score", 16}, {"loc", 8}}, true};
        two.validate(schemas);
        CHECK(map_to_cell(scored(0.5, 1, 100), two, schemas).coords == std::vector<std::uint32_t>{8, 2, 1});

        CHECK_THROWS_AS(map_to_cell(Metrics{{"is_valid", 1}}, space, schemas), CorruptMetricsError);
        BehaviorSpaceSpec ghost{{{"ghost", 4}}, true};
        CHECK_THROWS_AS(ghost.validate(schemas), ConfigError);
        CHECK_THROWS_AS(map_to_cell(scored(0.5), ghost, schemas), ConfigError);
        CHECK(json(two).get<BehaviorSpaceSpec>() == two);
    }

    TEST_CASE("insert decisions and lifecycle")
    {
        MetricSchema area{"min_area", true, 0.0, 0.05, 6, 1e-4, true};
        MetricSchema valid{"is_valid", true, 0, 1, 0, 0, false};
        ArchiveFixture fx({area, valid});
        auto archive = fx.archive();
        auto first = fx.complete(Metrics{{"min_area", 0.0360}, {"is_valid", 1}});
        auto o1 = archive.insert(first, {0});
        CHECK(o1[0].kind == InsertKind::AcceptedNew);
        CHECK(fx.state(first) == LifecycleState::Evolving);

        auto better = fx.complete(Metrics{{"min_area", 0.0364}, {"is_valid", 1}});
        auto o2 = archive.insert(better, {0});
        CHECK(o2[0].kind == InsertKind::Replaced);
        CHECK(o2[0].evicted == first.id);
        CHECK(fx.state(better) == LifecycleState::Evolving);
        CHECK(fx.state(first) == LifecycleState::Discarded);

        auto same = fx.complete(Metrics{{"min_area", 0.0364}, {"is_valid", 1}});
        auto o3 = archive.insert(same, {0});
        CHECK(o3[0].kind == InsertKind::Discarded);
        CHECK(o3[0].reason == "tie");
        CHECK(fx.state(same) == LifecycleState::Discarded);

        auto slight = fx.complete(Metrics{{"min_area", 0.03645}, {"is_valid", 1}});
        CHECK(archive.insert(slight, {0})[0].reason == "worse");

        auto a = fx.complete(Metrics{{"min_area", 0.0365}, {"is_valid", 1}});
        auto b = fx.complete(Metrics{{"min_area", 0.0365}, {"is_valid", 1}});
        CHECK(archive.insert(a, {0})[0].kind == InsertKind::Replaced);
        CHECK(archive.insert(b, {0})[0].reason == "tie");
        CHECK(archive.islands()[0].cells().size() == 1);
    }

    TEST_CASE("shared elites stay evolving until evicted everywhere")
    {
        ArchiveFixture fx;
        auto archive = fx.archive(2);
        auto p = fx.complete(scored(0.5));
        archive.insert(p, {0, 1});
        CHECK(archive.occupies_any(p.id));
        auto q = fx.complete(scored(0.52));
        archive.insert(q, {0});
        CHECK(fx.state(p) == LifecycleState::Evolving);
        archive.insert(fx.complete(scored(0.53)), {1});
        CHECK(fx.state(p) == LifecycleState::Discarded);
        CHECK_FALSE(archive.occupies_any(p.id));
    }

    TEST_CASE("selection weights and frequencies")
    {
        auto schemas = testing::score_schemas();
        const auto& primary = schemas[0];
        ProgramFactory f(2, true);
        CHECK(selection_weight(Elite{f.next_id(), scored(0.5)}, primary) == doctest::Approx(0.51));
        CHECK(selection_weight(Elite{f.next_id(), scored(0.5, 0)}, primary) == 0.01);

        Island island("i", fitness_validity_space(schemas));
        CHECK_THROWS_AS(select_parents(island, 1, *std::make_unique<Rng>(1), schemas), EmptyIsland);
        auto lo = f.next_id(), hi = f.next_id();
        island.place(BehaviorCell{{4, 1}}, Elite{lo, scored(0.25)});
        island.place(BehaviorCell{{12, 1}}, Elite{hi, scored(0.75)});
        Rng rng(99);
        auto draws = select_parents(island, 20000, rng, schemas, 0.0);
        auto hits = std::count(draws.begin(), draws.end(), hi);
        CHECK(hits / 20000.0 == doctest::Approx(0.75).epsilon(0.03));

        Island single("s", fitness_validity_space(schemas));
        single.place(BehaviorCell{{0, 0}}, Elite{lo, scored(0.0, 0)});
        for (auto id : select_parents(single, 50, rng, schemas))
            CHECK(id == lo);

        Rng a(5), b(5);
        CHECK(select_parents(island, 30, a, schemas) == select_parents(island, 30, b, schemas));
    }

    TEST_CASE("ring migration")
    {
        ArchiveFixture fx;
        auto archive = fx.archive(3);
        auto top = fx.complete(scored(0.9));
        archive.insert(top, {0});
        CHECK(archive.migrate(1) == 1);
        CHECK(archive.islands()[1].contains(top.id));
        CHECK_FALSE(archive.islands()[2].contains(top.id));
        CHECK(archive.migrate(1) == 1);
        CHECK(archive.islands()[2].contains(top.id));
        CHECK(archive.migrate(1) == 0);

        ArchiveFixture fx2;
        auto two = fx2.archive(2);
        auto weak = fx2.complete(scored(0.9));
        auto strong = fx2.complete(scored(0.93));
        two.insert(weak, {0});
        two.insert(strong, {1});
        auto before = two.snapshot();
        // strong migrates into island 0 and replaces weak there; weak's
        // migrant list was taken first but loses to strong in island 1.
        CHECK(two.migrate(1) == 1);
        CHECK(two.islands()[0].contains(strong.id));
        CHECK(two.islands()[1].contains(strong.id));
        CHECK(fx2.state(weak) == LifecycleState::Discarded);
        CHECK(fx2.store->get_required(strong.id).parent_ids.empty());
        CHECK(before != two.snapshot());
    }

    TEST_CASE("snapshot restores islands")
    {
        ArchiveFixture fx;
        auto archive = fx.archive(2);
        archive.insert(fx.complete(scored(0.3)), {0});
        archive.insert(fx.complete(scored(0.8, 0)), {1});
        auto snap = archive.snapshot();
        Archive back(Archive::islands_from_snapshot(snap), fx.store, fx.schemas);
        CHECK(back.snapshot() == snap);
        CHECK(back.best()->metrics.at("score") == 0.3);
    }

    TEST_CASE("engine steps write offspring and drain completions")
    {
        ArchiveFixture fx;
        mutation::ModelRoute route;
        route.model_id = "mock";
        auto mock = std::make_shared<mutation::MockClient>(route);
        mock->set_default(mutation::render_fenced("def entrypoint():\n    return 0.5"));
        auto router = std::make_shared<mutation::ModelRouter>(
            std::vector<std::shared_ptr<mutation::LlmClient>>{mock},
            mutation::RetryPolicy{2, std::chrono::milliseconds(1), 2.0, std::chrono::milliseconds(2)});
        EvolutionOptions opts;
        opts.batch = 3;
        opts.prompt.schemas = fx.schemas;
        auto factory = std::make_shared<ProgramFactory>(4, true);
        EvolutionEngine engine(fx.archive(), fx.store, router, factory, "task", opts, 7);

        auto empty = engine.step();
        CHECK(empty.offspring == 0);

        auto seed = complete_program(*fx.store, *factory, scored(0.2));
        auto r = engine.step();
        CHECK(r.inserted == 1);
        CHECK(r.accepted == 1);
        CHECK(r.offspring == 3);
        REQUIRE(r.new_programs.size() == 3);
        for (const auto& id : r.new_programs) {
            auto child = fx.store->get_required(id);
            CHECK(child.state == LifecycleState::Fresh);
            CHECK(child.parent_ids == std::vector<ProgramId>{seed.id});
            CHECK(child.generation == 1);
            CHECK(child.source == "def entrypoint():\n    return 0.5");
        }
        CHECK(r.best_fitness == 0.2);

        mock->fail_next(100);
        auto failing = engine.step();
        CHECK(failing.offspring == 0);
        CHECK(failing.mutation_failures == 3);
        CHECK(failing.failures_by_reason.at("llm_unavailable") == 3);
        CHECK(engine.failure_totals().at("llm_unavailable") == 3);
        CHECK(json(failing)["mutation_failures"] == 3);
    }
}
