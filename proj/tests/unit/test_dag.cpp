#include "evoforge/core/error.hpp"
#include "evoforge/core/program_factory.hpp"
#include "evoforge/dag/engine.hpp"
#include "evoforge/store/memory_store.hpp"

#include "../support/fn_stage.hpp"

#include <doctest.h>

#include <thread>

using namespace evoforge;
using namespace evoforge::dag;
using evoforge::testing::FnStage;
using evoforge::testing::spec;
using nlohmann::json;

namespace {

bool has_issue(const StageDAG& d, const std::string& kind)
{
    for (const auto& i : validate_dag(d))
        if (i.kind == kind)
            return true;
    return false;
}

struct Fixture {
    std::shared_ptr<store::InMemoryStore> store = std::make_shared<store::InMemoryStore>("dag");
    ProgramFactory factory{11, true};

    Program program(const std::string& source = "def entrypoint():\n    return 1\n")
    {
        return store::insert_program(*store, factory.make_seed(source));
    }
};

} // namespace

TEST_SUITE("dag")
{
    TEST_CASE("structural validation")
    {
        StageDAG ok{{spec("a"), spec("b", {"a"}), spec("c", {}, {"b"}, {"a"})}, {}};
        CHECK(validate_dag(ok).empty());
        CHECK(topological_order(ok) == std::vector<std::string>{"a", "b", "c"});

        StageDAG cyc{{spec("a", {"c"}), spec("b", {"a"}), spec("c", {"b"}), spec("d")}, {}};
        auto issues = validate_dag(cyc);
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].kind == "cycle");
        CHECK(issues[0].stages == std::vector<std::string>{"a", "b", "c"});
        CHECK_THROWS_AS(topological_order(cyc), ConfigError);

        CHECK(has_issue(StageDAG{{spec("a"), spec("a")}, {}}, "duplicate"));
        CHECK(has_issue(StageDAG{{spec("a", {"ghost"})}, {}}, "dangling"));
        CHECK_FALSE(has_issue(StageDAG{{spec("a", {"ext"})}, {"ext"}}, "dangling"));
        CHECK(has_issue(StageDAG{{spec("a", {}, {"ext"})}, {"ext"}}, "dangling"));
        CHECK(has_issue(StageDAG{}, "empty"));

        auto guarded = spec("b");
        guarded.precondition = precondition_from_json(json{{"exists", "a"}});
        CHECK(has_issue(StageDAG{{spec("a"), guarded}, {}}, "precondition"));
        guarded.order_after = {"a"};
        CHECK(validate_dag(StageDAG{{spec("a"), guarded}, {}}).empty());
    }

    TEST_CASE("dag json round trip and unknown fields")
    {
        auto j = json::parse(R"({"external_inputs":["ctx"],"stages":[
            {"name":"a","data_inputs":["ctx"]},
            {"name":"b","kind":"k","data_inputs":["a"],"precondition":{"stage":"a","field":"x.y","op":">=","value":2},
             "params":{"p":1}}]})");
        auto d = dag_from_json(j);
        CHECK(d.stages[0].kind == "a");
        CHECK(d.stages[1].precondition.kind == Precondition::Kind::Compare);
        CHECK(dag_from_json(dag_to_json(d)) == d);
        j["stages"][0]["colour"] = "red";
        CHECK_THROWS_WITH_AS(dag_from_json(j), doctest::Contains("colour"), ConfigError);
    }

    TEST_CASE("preconditions and comparisons")
    {
        CHECK(precondition_from_json("always").kind == Precondition::Kind::Always);
        auto m = precondition_from_json(json{{"metric", "is_valid"}, {"equals", 1}});
        CHECK(m.kind == Precondition::Kind::Metric);
        CHECK(m.op == "==");
        CHECK(compare_json(json(2.0), ">=", json(2)));
        CHECK_FALSE(compare_json(json("a"), "==", json("b")));
        CHECK(compare_json(json("a"), "!=", json("b")));
        CHECK_THROWS_AS(compare_json(json(1), "~", json(1)), ConfigError);
        json doc{{"x", {{"y", 3}}}};
        CHECK(*find_path(doc, "x.y") == 3);
        CHECK(find_path(doc, "x.z") == nullptr);
        CHECK(find_path(doc, "") == &doc);
    }

    TEST_CASE("diamond passes values and persists outcomes")
    {
        Fixture fx;
        auto a = std::make_shared<FnStage>([](const StageContext& c) { return c.input("ext").get<int>() + 1; });
        auto b = std::make_shared<FnStage>([](const StageContext& c) { return c.input("a").get<int>() * 2; });
        auto cst = std::make_shared<FnStage>([](const StageContext& c) { return c.input("a").get<int>() * 3; });
        auto d = std::make_shared<FnStage>(
            [](const StageContext& c) { return c.input("b").get<int>() + c.input("c").get<int>(); });
        StageDAG dag{{spec("a", {"ext"}), spec("b", {"a"}), spec("c", {"a"}), spec("d", {"b", "c"})}, {"ext"}};
        DagEngine engine(dag, {{"a", a}, {"b", b}, {"c", cst}, {"d", d}}, fx.store);
        auto p = fx.program();
        auto rec = engine.run_program(p, json{{"ext", 1}});
        CHECK(std::get<Done>(rec.outcomes.at("d")).value == 10);
        CHECK(rec.executed == 4);
        auto stored = fx.store->get_required(p.id);
        CHECK(stored.stage_outputs["d"]["status"] == "done");
        CHECK(stored.stage_outputs["d"]["value"] == 10);
        CHECK(stored.stage_outputs["d"].contains("cache_key"));

        CHECK_THROWS_AS(engine.run_program(p, json::object()), ConfigError);
    }

    TEST_CASE("unbound stages are rejected")
    {
        Fixture fx;
        CHECK_THROWS_AS(DagEngine(StageDAG{{spec("a")}, {}}, {}, fx.store), ConfigError);
    }

    TEST_CASE("errors skip data dependents and reach optional readers")
    {
        Fixture fx;
        auto boom = std::make_shared<FnStage>([](const StageContext&) -> json {
            throw StageFailure("kaput", "trace here");
        });
        auto dep = std::make_shared<FnStage>([](const StageContext&) { return 1; });
        auto watcher = std::make_shared<FnStage>([](const StageContext& c) {
            const auto* o = c.optional_outcome("boom");
            return std::holds_alternative<Errored>(*o) ? std::get<Errored>(*o).message : std::string("?");
        });
        auto after = std::make_shared<FnStage>([](const StageContext&) { return "ran"; });
        StageDAG dag{{spec("boom"), spec("dep", {"boom"}), spec("watch", {}, {"boom"}), spec("after", {}, {}, {"boom"})},
                     {}};
        DagEngine engine(dag, {{"boom", boom}, {"dep", dep}, {"watch", watcher}, {"after", after}}, fx.store);
        auto rec = engine.run_program(fx.program(), json::object());
        auto err = std::get<Errored>(rec.outcomes.at("boom"));
        CHECK(err.message == "kaput");
        CHECK(err.trace == "trace here");
        CHECK(std::get<Skipped>(rec.outcomes.at("dep")).reason.find("errored") != std::string::npos);
        CHECK(dep->calls == 0);
        CHECK(std::get<Done>(rec.outcomes.at("watch")).value == "kaput");
        CHECK(std::get<Done>(rec.outcomes.at("after")).value == "ran");
    }

    TEST_CASE("preconditions skip stages and cascade")
    {
        Fixture fx;
        auto check = std::make_shared<FnStage>([](const StageContext&) { return json{{"ok", false}}; });
        auto guarded = std::make_shared<FnStage>([](const StageContext&) { return 1; });
        auto down = std::make_shared<FnStage>([](const StageContext&) { return 2; });
        auto g = spec("guarded", {"check"});
        g.precondition = precondition_from_json(json{{"stage", "check"}, {"field", "ok"}, {"equals", true}});
        DagEngine engine(StageDAG{{spec("check"), g, spec("down", {"guarded"})}, {}},
                         {{"check", check}, {"guarded", guarded}, {"down", down}}, fx.store);
        auto rec = engine.run_program(fx.program(), json::object());
        CHECK(std::get<Skipped>(rec.outcomes.at("guarded")).reason.find("precondition") != std::string::npos);
        CHECK(std::holds_alternative<Skipped>(rec.outcomes.at("down")));
        CHECK(guarded->calls == 0);
        CHECK(down->calls == 0);
    }

    TEST_CASE("cached runs reuse Done values until inputs change")
    {
        Fixture fx;
        auto a = std::make_shared<FnStage>([](const StageContext& c) { return c.input("ext"); });
        auto live = std::make_shared<FnStage>([](const StageContext&) { return 0; }, false);
        DagEngine engine(StageDAG{{spec("a", {"ext"}), spec("live", {"a"})}, {"ext"}}, {{"a", a}, {"live", live}},
                         fx.store);
        auto p = fx.program();
        engine.run_program(p, json{{"ext", 1}});
        auto rec = engine.cached_run(p, json{{"ext", 1}});
        CHECK(rec.cache_hits == 1);
        CHECK(a->calls == 1);
        CHECK(live->calls == 2);
        rec = engine.cached_run(p, json{{"ext", 2}});
        CHECK(rec.cache_hits == 0);
        CHECK(a->calls == 2);
        rec = engine.run_program(p, json{{"ext", 2}});
        CHECK(a->calls == 3);
    }

    TEST_CASE("finalizer applies in the persisting write")
    {
        Fixture fx;
        auto a = std::make_shared<FnStage>([](const StageContext&) { return 5; });
        DagEngine engine(StageDAG{{spec("a")}, {}}, {{"a", a}}, fx.store);
        auto p = fx.program();
        const auto before = fx.store->get_required(p.id).version;
        engine.run_program(p, json::object(), [](Program& q, const OutcomeMap& o) {
            q.stage_outputs["seen"] = std::get<Done>(o.at("a")).value;
        });
        auto after = fx.store->get_required(p.id);
        CHECK(after.version == before + 1);
        CHECK(after.stage_outputs["seen"] == 5);
    }

    TEST_CASE("independent stages overlap under the stage cap")
    {
        Fixture fx;
        std::atomic<int> inside{0}, peak{0};
        auto slow = [&](const StageContext&) -> json {
            int now = ++inside;
            int prev = peak.load();
            while (now > prev && !peak.compare_exchange_weak(prev, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(60));
            --inside;
            return 1;
        };
        StageMap stages;
        StageDAG dag;
        for (int i = 0; i < 3; ++i) {
            auto n = "s" + std::to_string(i);
            dag.stages.push_back(spec(n));
            stages[n] = std::make_shared<FnStage>(slow);
        }
        dag.stages.push_back(spec("join", {"s0", "s1", "s2"}));
        stages["join"] = std::make_shared<FnStage>([](const StageContext&) { return 0; });
        DagEngine engine(dag, stages, fx.store, EngineOptions{1, 3});
        auto rec = engine.run_program(fx.program(), json::object());
        CHECK(peak == 3);
        TraceEvent join;
        std::uint64_t last_end = 0;
        for (const auto& ev : rec.trace) {
            if (ev.stage == "join")
                join = ev;
            else
                last_end = std::max(last_end, ev.end);
        }
        CHECK(join.start > last_end);

        peak = 0;
        DagEngine serial(dag, stages, fx.store, EngineOptions{1, 1});
        serial.run_program(fx.program("x = 2\n"), json::object());
        CHECK(peak == 1);
    }

    TEST_CASE("run_batch keeps input order")
    {
        Fixture fx;
        auto echo = std::make_shared<FnStage>([](const StageContext& c) { return c.program.source; });
        DagEngine engine(StageDAG{{spec("echo")}, {}}, {{"echo", echo}}, fx.store, EngineOptions{4, 1});
        std::vector<Program> ps;
        for (int i = 0; i < 10; ++i)
            ps.push_back(fx.program("src" + std::to_string(i)));
        auto recs = engine.run_batch(ps, json::object(), false);
        for (int i = 0; i < 10; ++i)
            CHECK(std::get<Done>(recs[i].outcomes.at("echo")).value == "src" + std::to_string(i));
    }
}
