#pragma once

#include "evoforge/mutation/llm_client.hpp"
#include "evoforge/mutation/router.hpp"
#include "evoforge/sandbox/literal_executor.hpp"
#include "evoforge/stages/evaluator.hpp"
#include "evoforge/stages/registry.hpp"

#include "test_support.hpp"

namespace evoforge::testing {

/// Toy problem wired through the default pipeline with the literal executor
/// and scripted insight and lineage models.
struct ToyPipeline {
    std::shared_ptr<store::InMemoryStore> store = std::make_shared<store::InMemoryStore>("toy");
    std::shared_ptr<mutation::MockClient> insight_model;
    std::shared_ptr<mutation::MockClient> lineage_model;
    std::shared_ptr<stages::StageServices> services = std::make_shared<stages::StageServices>();
    std::shared_ptr<dag::DagEngine> engine;
    std::shared_ptr<stages::ProgramEvaluator> evaluator;
    ProgramFactory factory{77, true};

    explicit ToyPipeline(dag::StageDAG dag = stages::default_pipeline())
    {
        mutation::ModelRoute ins;
        ins.stage_kind = mutation::StageKind::Insights;
        ins.model_id = "ins";
        insight_model = std::make_shared<mutation::MockClient>(ins);
        insight_model->set_default("- numerical [harmful] (high): constant is off\n"
                                   "- structural [neutral] (low): single return\n");
        mutation::ModelRoute lin;
        lin.stage_kind = mutation::StageKind::Lineage;
        lin.model_id = "lin";
        lineage_model = std::make_shared<mutation::MockClient>(lin);
        lineage_model->set_default("moved the constant");

        services->store = store;
        services->executor = std::make_shared<sandbox::LiteralExecutor>();
        services->problem = std::make_shared<problems::ProblemContext>(toy_problem());
        services->router = std::make_shared<mutation::ModelRouter>(
            std::vector<std::shared_ptr<mutation::LlmClient>>{insight_model, lineage_model});
        services->seed = 5;
        auto stage_map = stages::StageRegistry::with_builtins().build(dag, services);
        engine = std::make_shared<dag::DagEngine>(dag, stage_map, store, dag::EngineOptions{2, 2});
        evaluator = std::make_shared<stages::ProgramEvaluator>(engine, services);
    }

    static std::string constant_program(double v)
    {
        std::ostringstream s;
        s << "def entrypoint():\n    return " << v << "\n";
        return s.str();
    }

    Program seed(const std::string& source)
    {
        return store::insert_program(*store, factory.make_seed(source));
    }

    Program child(const std::string& source, const std::vector<Program>& parents)
    {
        return store::insert_program(*store, factory.make_child(source, parents));
    }

    Program evaluated(const Program& p)
    {
        evaluator->evaluate(p.id);
        return store->get_required(p.id);
    }
};

} // namespace evoforge::testing
