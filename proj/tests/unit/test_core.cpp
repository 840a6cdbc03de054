#include "evoforge/core/digest.hpp"
#include "evoforge/core/error.hpp"
#include "evoforge/core/metric_schema.hpp"
#include "evoforge/core/program.hpp"
#include "evoforge/core/program_factory.hpp"
#include "evoforge/core/random.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace evoforge;

TEST_SUITE("core")
{
    TEST_CASE("mt19937_64 stream matches the reference value")
    {
        Rng rng(5489);
        std::uint64_t x = 0;
        for (int i = 0; i < 10000; ++i)
            x = rng.next();
        CHECK(x == 9981545732273789042ULL);
    }

    TEST_CASE("below stays in range and uniform01 in [0, 1)")
    {
        Rng rng(1);
        for (int i = 0; i < 10000; ++i) {
            CHECK(rng.below(7) < 7);
            double u = rng.uniform01();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }

    TEST_CASE("lifecycle transitions")
    {
        using S = LifecycleState;
        CHECK(is_legal_transition(S::Fresh, S::Running));
        CHECK(is_legal_transition(S::Running, S::Complete));
        CHECK(is_legal_transition(S::Running, S::Failed));
        CHECK(is_legal_transition(S::Complete, S::Evolving));
        CHECK(is_legal_transition(S::Complete, S::Discarded));
        CHECK(is_legal_transition(S::Evolving, S::Discarded));
        CHECK_FALSE(is_legal_transition(S::Fresh, S::Complete));
        CHECK_FALSE(is_legal_transition(S::Discarded, S::Evolving));
        CHECK_FALSE(is_legal_transition(S::Failed, S::Running));
        CHECK_FALSE(is_legal_transition(S::Evolving, S::Complete));
        Program p;
        CHECK_THROWS_AS(lifecycle_transition(p, S::Evolving), StateMachineError);
        CHECK(lifecycle_transition(p, S::Running).state == S::Running);
        for (auto s : all_lifecycle_states)
            CHECK(lifecycle_from_string(to_string(s)) == s);
    }

    TEST_CASE("bin_index splits bounds into half-open bins")
    {
        MetricSchema s{"f", true, 0.0, 1.0, 4, 0.0, true};
        CHECK(bin_index(0.5, s, 16) == 8);
        CHECK(bin_index(0.0, s, 16) == 0);
        CHECK(bin_index(1.0, s, 16) == 15);
        CHECK(bin_index(-3.0, s, 16) == 0);
        CHECK(bin_index(7.0, s, 16) == 15);
    }

    TEST_CASE("significant improvement respects direction and threshold")
    {
        MetricSchema hi{"f", true, 0.0, 1.0, 4, 1e-4, true};
        CHECK(is_significant_improvement(0.0364, 0.0360, hi));
        CHECK_FALSE(is_significant_improvement(0.0365, 0.0365, hi));
        CHECK_FALSE(is_significant_improvement(0.03605, 0.0360, hi));
        MetricSchema lo{"f", false, 0.0, 1.0, 4, 0.0, true};
        CHECK(is_significant_improvement(0.1, 0.2, lo));
        CHECK_FALSE(is_significant_improvement(0.2, 0.2, lo));
        CHECK_THROWS_AS(is_significant_improvement(std::nan(""), 0.2, lo), CorruptMetricsError);
    }

    TEST_CASE("normalized fitness and worst values")
    {
        MetricSchema hi{"f", true, 2.0, 4.0, 2, 0.0, true};
        MetricSchema lo{"g", false, 2.0, 4.0, 2, 0.0, false};
        CHECK(normalized_fitness(3.0, hi) == doctest::Approx(0.5));
        CHECK(normalized_fitness(2.5, lo) == doctest::Approx(0.75));
        CHECK(worst_value(hi) == 2.0);
        CHECK(worst_value(lo) == 4.0);
        CHECK(directed_delta(3.0, 2.5, lo) == doctest::Approx(0.5));
        CHECK(format_metric(3.14159, hi) == "3.14");
    }

    TEST_CASE("schema sets need exactly one primary")
    {
        std::vector<MetricSchema> none{{"a", true, 0, 1, 2, 0, false}};
        CHECK_THROWS_AS(validate_schema_set(none), ConfigError);
        std::vector<MetricSchema> dup{{"a", true, 0, 1, 2, 0, true}, {"a", true, 0, 1, 2, 0, false}};
        CHECK_THROWS_AS(validate_schema_set(dup), ConfigError);
        std::vector<MetricSchema> bad_bounds{{"a", true, 1, 1, 2, 0, true}};
        CHECK_THROWS_AS(validate_schema_set(bad_bounds), ConfigError);
    }

    TEST_CASE("program JSON round trip")
    {
        ProgramFactory f(3, true);
        auto seed = f.make_seed("x = 1\n");
        auto child = f.make_child("x = 2\n", std::vector<Program>{seed});
        child.metrics = Metrics{{"is_valid", 1.0}, {"score", 0.25}};
        child.stage_outputs = {{"s", {{"status", "done"}, {"value", 3}}}};
        nlohmann::json j = child;
        auto back = j.get<Program>();
        CHECK(back.id == child.id);
        CHECK(back.parent_ids == child.parent_ids);
        CHECK(back.generation == 1);
        CHECK(back.metrics == child.metrics);
        CHECK(back.stage_outputs == child.stage_outputs);
        CHECK(back.created_at > seed.created_at);
        check_program_invariants(back);
    }

    TEST_CASE("factories with equal seeds mint equal ids")
    {
        ProgramFactory a(9, true), b(9, true);
        for (int i = 0; i < 5; ++i)
            CHECK(a.next_id() == b.next_id());
        CHECK(Uuid::parse(a.next_id().str()).str().size() == 36);
    }

    TEST_CASE("sha256 known digest")
    {
        CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
