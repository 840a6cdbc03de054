#include "evoforge/core/digest.hpp"
#include "evoforge/core/program_factory.hpp"
#include "evoforge/mutation/context.hpp"
#include "evoforge/mutation/llm_client.hpp"
#include "evoforge/mutation/mutate.hpp"
#include "evoforge/mutation/parsing.hpp"
#include "evoforge/mutation/prompt.hpp"
#include "evoforge/mutation/router.hpp"

#include "../support/mutation_props.hpp"
#include "../support/test_support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <thread>

using namespace evoforge;
using namespace evoforge::mutation;
using nlohmann::json;

namespace {

ModelRoute route(StageKind kind = StageKind::Mutation, std::string model = "m", double weight = 1.0)
{
    ModelRoute r;
    r.stage_kind = kind;
    r.model_id = std::move(model);
    r.weight = weight;
    return r;
}

RetryPolicy fast_retry(int attempts = 3)
{
    return RetryPolicy{attempts, std::chrono::milliseconds(1), 2.0, std::chrono::milliseconds(4)};
}

MutationContext context_for(const Program& p)
{
    MutationContext c;
    c.program_id = p.id;
    c.source = p.source;
    c.metrics = p.metrics.value_or(Metrics{});
    return c;
}

} // namespace

TEST_SUITE("mutation")
{
    TEST_CASE("rewrite parsing takes the last complete block")
    {
        CHECK(parse_rewrite("intro\n```python\na = 1\n```\nthen\n```\nb = 2\n```\n") == "b = 2");
        CHECK(parse_rewrite("```python\nx\n```\n```python\nunterminated\n") == "x");
        CHECK_THROWS_WITH_AS(parse_rewrite("no code here"), doctest::Contains("no_fenced_block"), ParseFailure);
        try {
            parse_rewrite("```python\n   \n```\n");
            FAIL("expected empty_block");
        } catch (const ParseFailure& e) {
            CHECK(e.reason() == "empty_block");
        }
    }

    TEST_CASE("diff parsing and application")
    {
        const std::string parent = "def entrypoint():\n    return 0.1\n";
        auto out = apply_diff(parent, "<<<<<<< SEARCH\n    return 0.1\n=======\n    return 0.5\n>>>>>>> REPLACE\n");
        CHECK(out == "def entrypoint():\n    return 0.5\n");
        auto reason = [&](std::string_view response) {
            try {
                apply_diff(parent, response);
            } catch (const ParseFailure& e) {
                return e.reason();
            }
            return std::string("accepted");
        };
        CHECK(reason("<<<<<<< SEARCH\nnope\n=======\nx\n>>>>>>> REPLACE\n") == "diff_not_found");
        CHECK(reason("<<<<<<< SEARCH\nreturn\n=======\nx\n") == "diff_malformed");
        CHECK(reason(">>>>>>> REPLACE\n") == "diff_malformed");
        CHECK(reason("<<<<<<< SEARCH\n=======\nx\n>>>>>>> REPLACE\n") == "diff_malformed");
    }

    TEST_CASE("parsing properties hold on random inputs")
    {
        auto a = testing::rewrite_round_trip(1, 500);
        CHECK_MESSAGE(a.ok(), a.counterexamples.front());
        auto b = testing::diff_round_trip(2, 500);
        CHECK_MESSAGE(b.ok(), b.counterexamples.front());
        auto c = testing::diff_rejections(3, 200);
        CHECK_MESSAGE(c.ok(), c.counterexamples.front());
        auto d = testing::insight_round_trip(4, 500);
        CHECK_MESSAGE(d.ok(), d.counterexamples.front());
    }

    TEST_CASE("insight lines")
    {
        auto i = parse_insight_line("  2. Numerical [Harmful] (HIGH): step size too large");
        REQUIRE(i);
        CHECK(i->category == InsightCategory::Numerical);
        CHECK(i->effect == InsightEffect::Harmful);
        CHECK(i->severity == InsightSeverity::High);
        CHECK(i->text == "step size too large");
        CHECK_FALSE(parse_insight_line("numerical harmful high: no brackets"));
        CHECK_FALSE(parse_insight_line("magic [harmful] (high): unknown category"));
        CHECK_FALSE(parse_insight_line("other [neutral] (low):"));
        auto many = parse_insights("junk\n- other [neutral] (low): a\n* other [neutral] (low): b\nx [y] (z): c\n"
                                   "other [neutral] (low): d\n",
                                   2);
        REQUIRE(many.size() == 2);
        CHECK(many[1].text == "b");
    }

    TEST_CASE("mutation context json round trip")
    {
        ProgramFactory f(8, true);
        MutationContext c;
        c.program_id = f.next_id();
        c.source = "s";
        c.metrics = {{"score", 0.5}};
        c.insights = {{InsightCategory::Structural, InsightEffect::Beneficial, InsightSeverity::Medium, "t"}};
        c.lineage_from_ancestors = {{f.next_id(), c.program_id, 0.25, "better"}};
        c.error_trace = "boom";
        c.truncated = true;
        CHECK(json(c).get<MutationContext>() == c);
    }

    TEST_CASE("prompts are deterministic and section per parent")
    {
        ProgramFactory f(9, true);
        auto p = f.make_seed("def entrypoint():\n    return 0.1\n");
        p.metrics = Metrics{{"score", 0.19}, {"is_valid", 1.0}, {"extra", 3.0}};
        auto c = context_for(p);
        c.insights = {{InsightCategory::Algorithmic, InsightEffect::Neutral, InsightSeverity::Low, "constant"}};
        c.lineage_to_descendants = {{p.id, f.next_id(), -0.125, "got worse"}};
        c.error_trace = "ValueError: x";
        PromptOptions opt{testing::score_schemas(), 60000};
        std::vector<MutationContext> ctxs{c, c};
        auto prompt = build_prompt("Maximise the score.", ctxs, MutationMode::Rewrite, opt);
        CHECK(prompt == build_prompt("Maximise the score.", ctxs, MutationMode::Rewrite, opt));
        CHECK(prompt.find("# Parent 1") != std::string::npos);
        CHECK(prompt.find("# Parent 2") != std::string::npos);
        CHECK(prompt.find("- score: 0.1900 (primary)") != std::string::npos);
        CHECK(prompt.find("- extra: 3") != std::string::npos);
        CHECK(prompt.find("(delta -0.1250): got worse") != std::string::npos);
        CHECK(prompt.find("## Error trace") != std::string::npos);
        CHECK(prompt.find(std::string(rewrite_instructions())) != std::string::npos);
        CHECK(build_prompt("t", ctxs, MutationMode::Diff, opt).find("<<<<<<< SEARCH") != std::string::npos);
        opt.max_prompt_chars = 100;
        CHECK_THROWS_AS(build_prompt("t", ctxs, MutationMode::Rewrite, opt), PromptTooLong);
        CHECK_THROWS_AS(mutation_mode_from_string("patch"), ConfigError);
    }

    TEST_CASE("mock lookup order")
    {
        MockClient m(route());
        const std::string prompt = "hello world";
        m.set_default("default");
        CHECK(m.complete(prompt) == "default");
        m.push_sequence("first");
        m.push_sequence("second");
        CHECK(m.complete(prompt) == "first");
        m.add_rule("world", "rule");
        CHECK(m.complete(prompt) == "rule");
        m.add_digest(sha256_hex(prompt), "digest");
        CHECK(m.complete(prompt) == "digest");
        CHECK(m.complete("other") == "second");
        CHECK(m.complete("other") == "default");
        m.fail_next(1);
        CHECK_THROWS_AS(m.complete(prompt), TransportError);
        CHECK(m.call_count() == 7);
        CHECK(m.prompts().back() == prompt);

        MockClient bare(route());
        CHECK_THROWS_AS(bare.complete("x"), LlmUnavailable);

        auto scripted = MockClient::from_json(
            route(), json::parse(R"({"rules":[{"contains":"a","response":"A"}],"sequence":["S"],"default":"D"})"));
        CHECK(scripted->complete("xay") == "A");
        CHECK(scripted->complete("q") == "S");
        CHECK(scripted->complete("q") == "D");
    }

    TEST_CASE("router retries, budgets and weights")
    {
        auto flaky = std::make_shared<MockClient>(route());
        flaky->set_default("ok");
        flaky->fail_next(2);
        ModelRouter r({flaky}, fast_retry(3));
        Rng rng(1);
        CHECK(r.route_and_call(StageKind::Mutation, "p", rng) == "ok");
        CHECK(r.calls() == 3);
        CHECK(r.failed_calls() == 2);

        flaky->fail_next(3);
        CHECK_THROWS_AS(r.route_and_call(StageKind::Mutation, "p", rng), LlmUnavailable);
        CHECK_THROWS_AS(r.route_and_call(StageKind::Insights, "p", rng), LlmUnavailable);

        ModelRouter budget({flaky}, fast_retry(), 8, 2);
        budget.route_and_call(StageKind::Mutation, "p", rng);
        budget.route_and_call(StageKind::Mutation, "p", rng);
        CHECK(budget.budget_exhausted());
        CHECK_THROWS_WITH_AS(budget.route_and_call(StageKind::Mutation, "p", rng), doctest::Contains("budget"),
                             LlmUnavailable);
        CHECK(flaky->call_count() == 8);

        auto heavy = std::make_shared<MockClient>(route(StageKind::Mutation, "heavy", 3.0));
        auto light = std::make_shared<MockClient>(route(StageKind::Mutation, "light", 1.0));
        auto other = std::make_shared<MockClient>(route(StageKind::Insights, "ins", 5.0));
        ModelRouter w({light, other, heavy}, fast_retry());
        int heavy_hits = 0;
        for (int i = 0; i < 20000; ++i)
            heavy_hits += w.sample_route(StageKind::Mutation, rng) == 2;
        CHECK(heavy_hits / 20000.0 == doctest::Approx(0.75).epsilon(0.03));

        ModelRoute bad = route();
        bad.weight = 0;
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }

    TEST_CASE("mutate reports failures by reason")
    {
        ProgramFactory f(10, true);
        std::vector<Program> parents{f.make_seed("def entrypoint():\n    return 0.1\n")};
        std::vector<MutationContext> ctxs{context_for(parents[0])};
        auto mock = std::make_shared<MockClient>(route());
        ModelRouter router({mock}, fast_retry(1));
        Rng rng(3);

        mock->push_sequence(render_fenced("def entrypoint():\n    return 0.6"));
        auto ok = mutate(parents, ctxs, MutationMode::Rewrite, router, rng, "task");
        REQUIRE(ok.ok());
        CHECK(*ok.source == "def entrypoint():\n    return 0.6");
        CHECK(ok.prompt == mock->prompts().back());

        mock->push_sequence("I refuse.");
        CHECK(mutate(parents, ctxs, MutationMode::Rewrite, router, rng, "task").failure->reason ==
              "no_fenced_block");

        mock->push_sequence(render_diff({{"return 0.1", "return 0.9"}}));
        auto d = mutate(parents, ctxs, MutationMode::Diff, router, rng, "task");
        REQUIRE(d.ok());
        CHECK(d.source->find("return 0.9") != std::string::npos);

        mock->push_sequence("no edits");
        CHECK(mutate(parents, ctxs, MutationMode::Diff, router, rng, "task").failure->reason == "diff_empty");

        mock->fail_next(1);
        CHECK(mutate(parents, ctxs, MutationMode::Rewrite, router, rng, "task").failure->reason ==
              "llm_unavailable");
        PromptOptions tiny;
        tiny.max_prompt_chars = 10;
        CHECK(mutate(parents, ctxs, MutationMode::Rewrite, router, rng, "task", tiny).failure->reason ==
              "prompt_too_long");
    }

    TEST_CASE("http client speaks the chat completions protocol")
    {
        httplib::Server server;
        std::atomic<int> hits{0};
        json last_body;
        std::string last_auth;
        server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
            int n = ++hits;
            last_body = json::parse(req.body);
            last_auth = req.get_header_value("Authorization");
            if (n == 1) {
                res.status = 503;
                return;
            }
            res.set_content(json{{"choices", {{{"message", {{"content", "reply"}}}}}}}.dump(), "application/json");
        });
        server.Post("/bad/chat/completions", [](const httplib::Request&, httplib::Response& res) {
            res.status = 400;
            res.set_content("nope", "text/plain");
        });
        const int port = server.bind_to_any_port("127.0.0.1");
        std::thread t([&] { server.listen_after_bind(); });
        server.wait_until_ready();

        ::setenv("EVOFORGE_TEST_KEY", "sekrit", 1);
        auto r = route(StageKind::Mutation, "remote-model");
        r.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
        r.temperature = 0.25;
        HttpOptions opts;
        opts.api_key_env = "EVOFORGE_TEST_KEY";
        auto client = std::make_shared<HttpClient>(r, opts);
        CHECK_THROWS_AS(client->complete("hi"), TransportError);
        CHECK(client->complete("hi") == "reply");
        CHECK(last_body["model"] == "remote-model");
        CHECK(last_body["temperature"] == 0.25);
        CHECK(last_body["messages"][0]["content"] == "hi");
        CHECK(last_auth == "Bearer sekrit");

        hits = 0;
        ModelRouter router({client}, fast_retry(2));
        Rng rng(1);
        CHECK(router.route_and_call(StageKind::Mutation, "again", rng) == "reply");
        CHECK(router.failed_calls() == 1);

        auto bad = r;
        bad.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/bad/chat/completions";
        CHECK_THROWS_AS(HttpClient(bad, opts).complete("x"), LlmUnavailable);
        CHECK_THROWS_AS(HttpClient::extract_content(json{{"choices", json::array()}}), LlmUnavailable);

        server.stop();
        t.join();
    }
}
