#include "evoforge/core/error.hpp"
#include "evoforge/stages/context.hpp"
#include "evoforge/stages/lineage.hpp"
#include "evoforge/stages/metrics.hpp"
#include "evoforge/stages/templates.hpp"
#include "evoforge/problems/yaml_json.hpp"

#include "../support/pipeline.hpp"

#include <doctest.h>

#include <cmath>

using namespace evoforge;
using namespace evoforge::stages;
using evoforge::testing::ToyPipeline;
using nlohmann::json;

TEST_SUITE("stages")
{
    TEST_CASE("complexity metrics")
    {
        auto m = compute_complexity("# header\n\ndef f():\n    # note\n    return 1\n  \n");
        CHECK(m.at("loc") == 2);
        CHECK(m.at("chars") == 46);
        CHECK(compute_complexity("é").at("chars") == 1);
    }

    TEST_CASE("merge and ensure fills every schema")
    {
        auto schemas = testing::score_schemas();
        auto m = merge_and_ensure_metrics(Metrics{{"score", 0.5}, {"is_valid", 1}, {"loc", 9}}, Metrics{{"loc", 3}},
                                          schemas);
        CHECK(m.at("score") == 0.5);
        CHECK(m.at("loc") == 9);
        CHECK(m.at("is_valid") == 1);

        auto missing = merge_and_ensure_metrics(Metrics{{"is_valid", 1}}, Metrics{{"loc", 3}}, schemas);
        CHECK(missing.at("score") == 0.0);
        CHECK(missing.at("is_valid") == 0);

        auto nan = merge_and_ensure_metrics(Metrics{{"score", std::nan("")}, {"is_valid", 1}}, {}, schemas);
        CHECK(nan.at("score") == 0.0);
        CHECK(nan.at("loc") == 400.0);
        CHECK(nan.at("is_valid") == 0);

        CHECK(merge_and_ensure_metrics(std::nullopt, Metrics{{"loc", 1}}, schemas).at("is_valid") == 0);
        CHECK(metrics_from_json(json{{"a", true}, {"b", 2}}) == Metrics{{"a", 1.0}, {"b", 2.0}});
        CHECK_THROWS_AS(metrics_from_json(json{{"a", "x"}}), Error);
    }

    TEST_CASE("templates keep unknown braces")
    {
        CHECK(fill_template("{a} and {b} and {{c}}", {{"a", "1"}, {"c", "3"}}) == "1 and {b} and {3}");
        CHECK(std::string(default_insights_template()).find("{source}") != std::string::npos);
        CHECK(std::string(default_lineage_template()).find("{primary_delta}") != std::string::npos);
    }

    TEST_CASE("context assembly ranks and caps")
    {
        ProgramFactory f(3, true);
        auto p = f.make_seed(std::string(50, 'x'));
        using namespace mutation;
        std::vector<Insight> ins{{InsightCategory::Other, InsightEffect::Neutral, InsightSeverity::Low, "l"},
                                 {InsightCategory::Other, InsightEffect::Neutral, InsightSeverity::High, "h1"},
                                 {InsightCategory::Other, InsightEffect::Neutral, InsightSeverity::Medium, "m"},
                                 {InsightCategory::Other, InsightEffect::Neutral, InsightSeverity::High, "h2"}};
        ContextCaps caps{20, 3, 1};
        std::vector<LineageAnalysis> from{{f.next_id(), p.id, 0.1, "a"}, {f.next_id(), p.id, 0.2, "b"}};
        auto c = assemble_mutation_context(p, Metrics{{"score", 1}}, ins, from, {}, "trace", caps);
        REQUIRE(c.insights.size() == 3);
        CHECK(c.insights[0].text == "h1");
        CHECK(c.insights[1].text == "h2");
        CHECK(c.insights[2].text == "m");
        CHECK(c.lineage_from_ancestors.size() == 1);
        CHECK(c.source.rfind(std::string(20, 'x'), 0) == 0);
        CHECK(c.source.find("[truncated]") != std::string::npos);
        CHECK(c.truncated);
        auto whole = assemble_mutation_context(p, {}, {}, {}, {}, std::nullopt, ContextCaps{});
        CHECK_FALSE(whole.truncated);
        CHECK(whole.source == p.source);
    }

    TEST_CASE("registry knows the builtins and rejects unknown kinds")
    {
        auto reg = StageRegistry::with_builtins();
        for (const auto& s : default_pipeline().stages)
            CHECK(reg.has(s.kind));
        CHECK(dag::validate_dag(default_pipeline()).empty());
        ToyPipeline tp;
        dag::StageDAG d;
        d.stages.push_back(dag::StageSpec{"x", "no_such_kind", {}, {}, {}, {}, json::object()});
        CHECK_THROWS_WITH_AS(reg.build(d, tp.services), doctest::Contains("no_such_kind"), ConfigError);
    }

    TEST_CASE("evaluation completes valid programs with metrics")
    {
        ToyPipeline tp;
        auto p = tp.seed(ToyPipeline::constant_program(0.1));
        auto s = tp.evaluator->evaluate(p.id);
        CHECK(s.final_state == LifecycleState::Complete);
        auto stored = tp.store->get_required(p.id);
        REQUIRE(stored.metrics);
        CHECK(stored.metrics->at("score") == doctest::Approx(0.64));
        CHECK(stored.metrics->at("is_valid") == 1);
        CHECK(stored.metrics->at("loc") == 2);
        CHECK(stored.stage_outputs["call_program"]["value"] == 0.1);
        auto ctx = stored.stage_outputs["mutation_context"]["value"].get<mutation::MutationContext>();
        CHECK(ctx.insights.size() == 2);
        CHECK(ctx.insights[0].severity == mutation::InsightSeverity::High);
        CHECK_FALSE(ctx.error_trace);

        // Already evaluated programs are left alone.
        auto again = tp.evaluator->evaluate(p.id);
        CHECK(again.executed == 0);
        CHECK(tp.store->get_required(p.id).version == stored.version);
    }

    TEST_CASE("candidate errors become invalid metrics with a trace")
    {
        ToyPipeline tp;
        auto raising = tp.evaluated(tp.seed("def entrypoint():\n    raise ValueError('bad constant')\n"));
        CHECK(raising.state == LifecycleState::Complete);
        CHECK(raising.metrics->at("is_valid") == 0);
        CHECK(raising.metrics->at("score") == 0.0);
        auto ctx = raising.stage_outputs["mutation_context"]["value"].get<mutation::MutationContext>();
        REQUIRE(ctx.error_trace);
        CHECK(ctx.error_trace->find("call_program: ValueError: bad constant") == 0);
        CHECK(tp.insight_model->prompts().back().find("bad constant") != std::string::npos);

        auto broken = tp.evaluated(tp.seed("def entrypoint(:\n    return 1\n"));
        CHECK(broken.stage_outputs["validate_code"]["status"] == "errored");
        CHECK(broken.stage_outputs["call_program"]["status"] == "skipped");
        CHECK(broken.metrics->at("is_valid") == 0);

        auto out_of_range = tp.evaluated(tp.seed(ToyPipeline::constant_program(3)));
        auto oc = out_of_range.stage_outputs["mutation_context"]["value"].get<mutation::MutationContext>();
        REQUIRE(oc.error_trace);
        CHECK(oc.error_trace->find("call_validator: output rejected (range)") == 0);

        auto slow = tp.evaluated(tp.seed("def entrypoint():\n    while True:\n        pass\n"));
        CHECK(slow.stage_outputs["call_program"]["message"].get<std::string>().find("Timeout") == 0);
    }

    TEST_CASE("lineage flows to children and back to parents")
    {
        ToyPipeline tp;
        auto parent = tp.evaluated(tp.seed(ToyPipeline::constant_program(0.1)));
        auto child = tp.evaluated(tp.child(ToyPipeline::constant_program(0.5), {parent}));
        auto analyses = child.stage_outputs["lineage"]["value"].get<std::vector<mutation::LineageAnalysis>>();
        REQUIRE(analyses.size() == 1);
        CHECK(analyses[0].parent_id == parent.id);
        CHECK(analyses[0].primary_delta == doctest::Approx(0.96 - 0.64));
        CHECK(analyses[0].explanation == "moved the constant");

        auto grandchild = tp.evaluated(tp.child(ToyPipeline::constant_program(0.6), {child}));
        auto gc = grandchild.stage_outputs["mutation_context"]["value"].get<mutation::MutationContext>();
        CHECK(gc.lineage_from_ancestors.size() == 2);

        // The parent's stored context predates its children; a refresh sees them.
        auto before = parent.stage_outputs["mutation_context"]["value"].get<mutation::MutationContext>();
        CHECK(before.lineage_to_descendants.empty());
        const auto insight_calls = tp.insight_model->call_count();
        auto refreshed = tp.evaluator->refresh_context(parent.id);
        REQUIRE(refreshed);
        REQUIRE(refreshed->lineage_to_descendants.size() == 1);
        CHECK(refreshed->lineage_to_descendants[0].child_id == child.id);
        CHECK(tp.insight_model->call_count() == insight_calls);
        CHECK(tp.store->get_required(parent.id).state == LifecycleState::Complete);
    }

    TEST_CASE("primary delta direction")
    {
        MetricSchema lower{"err", false, 0, 1, 4, 0, true};
        CHECK(primary_delta(Metrics{{"err", 0.5}}, Metrics{{"err", 0.2}}, lower) == doctest::Approx(0.3));
        CHECK(primary_delta(Metrics{{"err", 0.5}}, Metrics{{"err", 0.2}}, lower, true) == doctest::Approx(-0.3));
    }

    TEST_CASE("relatives are ranked by strategy")
    {
        ToyPipeline tp;
        auto root = tp.evaluated(tp.seed(ToyPipeline::constant_program(0.1)));
        std::vector<Program> kids;
        for (double v : {0.2, 0.6, 0.4})
            kids.push_back(tp.evaluated(tp.child(ToyPipeline::constant_program(v), {root})));
        tp.child(ToyPipeline::constant_program(0.7), {root});
        const auto& primary = tp.services->problem->primary();
        auto top = select_relatives(root, RelativeDirection::Descendants, RelativeStrategy::TopFitness, 2, *tp.store,
                                    primary, 1);
        REQUIRE(top.size() == 2);
        CHECK(top[0] == kids[1].id);
        CHECK(top[1] == kids[2].id);
        auto recent = select_relatives(root, RelativeDirection::Descendants, RelativeStrategy::MostRecent, 2,
                                       *tp.store, primary, 1);
        CHECK(recent == std::vector<ProgramId>{kids[2].id, kids[1].id});
        auto up = select_relatives(kids[0], RelativeDirection::Ancestors, RelativeStrategy::TopFitness, 3, *tp.store,
                                   primary, 5);
        CHECK(up == std::vector<ProgramId>{root.id});
    }

    TEST_CASE("evaluate_only pipeline from config")
    {
        auto j = load_yaml_file(testing::source_dir() / "configs" / "dags" / "evaluate_only.yaml");
        ToyPipeline tp(dag::dag_from_json(j));
        auto p = tp.evaluated(tp.seed(ToyPipeline::constant_program(0.7)));
        CHECK(p.state == LifecycleState::Complete);
        CHECK(p.metrics->at("score") == 1.0);
        CHECK(tp.insight_model->call_count() == 0);
    }
}
