#include "evoforge/core/error.hpp"
#include "evoforge/problems/bin_packing.hpp"
#include "evoforge/problems/circle_packing.hpp"
#include "evoforge/problems/geometry.hpp"
#include "evoforge/problems/heilbronn.hpp"
#include "evoforge/problems/kissing.hpp"
#include "evoforge/problems/problem.hpp"
#include "evoforge/problems/toy.hpp"
#include "evoforge/problems/validators.hpp"
#include "evoforge/problems/yaml_json.hpp"
#include "evoforge/sandbox/subprocess_executor.hpp"

#include "../support/test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace evoforge;
using namespace evoforge::problems;
using nlohmann::json;

namespace {

json point_list(const std::vector<Point2>& pts)
{
    json out = json::array();
    for (auto p : pts)
        out.push_back({p.x, p.y});
    return out;
}

} // namespace

TEST_SUITE("problems")
{
    TEST_CASE("unit triangle has area one")
    {
        auto t = unit_triangle();
        CHECK(t[0] == Point2{0.0, 0.0});
        CHECK(triangle_area(t[0], t[1], t[2]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(inside_triangle({0.0, -1.0}, t));
        CHECK(inside_triangle(t[1], t));
        CHECK_FALSE(inside_triangle({0.0, 0.1}, t));
        CHECK(min_triangle_area(PointSet{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}) == 0.5);
        CHECK_THROWS_AS(min_triangle_area(PointSet{{{0, 0}, {1, 0}}}), Error);
    }

    TEST_CASE("heilbronn validation")
    {
        auto t = unit_triangle();
        Point2 centroid{(t[1].x + t[2].x) / 3.0, (t[1].y + t[2].y) / 3.0};
        PointSet four{{t[0], t[1], t[2], centroid}};
        auto ok = heilbronn_validate(four, 4);
        REQUIRE(ok.valid());
        CHECK(ok.metrics.at("is_valid") == 1.0);
        CHECK(ok.metrics.at("min_area") == min_triangle_area(four));
        CHECK(ok.metrics.at("min_area") == doctest::Approx(1.0 / 3.0));
        CHECK(heilbronn_validate(four, 11).reason == "cardinality");

        CHECK(heilbronn_validate(PointSet{{t[0], t[1], t[2]}}, 3).metrics.at("min_area") ==
              doctest::Approx(1.0));
        CHECK(heilbronn_validate(PointSet{{t[0], t[1]}}, 3).reason == "cardinality");
        CHECK(heilbronn_validate(PointSet{{t[0], t[1], {0.0, 0.5}}}, 3).reason == "containment");
        CHECK(heilbronn_validate(PointSet{{t[0], t[1], t[1]}}, 3).reason == "duplicate");
        CHECK(heilbronn_validate(PointSet{{t[0], {0.0, -0.5}, {0.0, -1.0}}}, 3).reason == "collinear");
        CHECK(heilbronn_validate(json("nope"), 3).reason == "malformed");
        CHECK(heilbronn_validate(json::parse("[[0,0],[1],[2,2]]"), 3).reason == "malformed");
        CHECK(heilbronn_validate(point_list({t[0], t[1], t[2]}), 3).valid());
        auto bad = heilbronn_validate(json("x"), 3);
        CHECK(bad.metrics.at("is_valid") == 0.0);
    }

    TEST_CASE("circle packing validation")
    {
        CirclePacking one{{{0.5, 0.5, 0.5}}};
        auto r = circle_packing_validate(one, 1);
        REQUIRE(r.valid());
        CHECK(r.metrics.at("sum_radii") == 0.5);
        CHECK(circle_packing_validate(CirclePacking{{{0.5, 0.5, 0.5 + 1e-10}}}, 1).valid());
        CHECK(circle_packing_validate(CirclePacking{{{0.5, 0.5, 0.51}}}, 1).reason == "containment");
        CHECK(circle_packing_validate(CirclePacking{{{0.25, 0.5, 0.25}, {0.74, 0.5, 0.25}}}, 2).reason ==
              "overlap");
        CHECK(circle_packing_validate(CirclePacking{{{0.25, 0.5, 0.25}, {0.75, 0.5, 0.25}}}, 2).valid());
        CHECK(circle_packing_validate(one, 2).reason == "cardinality");
        CHECK(circle_packing_validate(CirclePacking{{{0.5, 0.5, -0.1}}}, 1).reason == "radius");
        CHECK(circle_packing_validate(json::parse("[[0.5,0.5]]"), 1).reason == "malformed");
    }

    TEST_CASE("kissing validation is exact")
    {
        auto d4 = json::parse(testing::read_file(testing::fixtures_dir() / "kissing_d4.json"));
        auto r = kissing_validate(d4["vectors"], 4);
        REQUIRE(r.valid());
        CHECK(r.metrics.at("num_vectors") == 24);
        CHECK(kissing_validate(d4["vectors"], 5).reason == "dimension");

        auto e8 = json::parse(testing::read_file(testing::fixtures_dir() / "kissing_e8_doubled.json"));
        CHECK(kissing_validate(e8["vectors"], 8).metrics.at("num_vectors") == 240);

        CHECK(kissing_validate(json::parse("[[1,0],[1,0]]")).reason == "duplicate");
        CHECK(kissing_validate(json::parse("[[1,0],[0,2]]")).reason == "shell");
        CHECK(kissing_validate(json::parse("[[0,0]]")).reason == "zero");
        CHECK(kissing_validate(json::parse("[[2,0],[1,1]]")).reason == "shell");
        CHECK(kissing_validate(json::parse("[[1,1],[1,-1],[-1,1]]")).valid());
        CHECK(kissing_validate(json::parse("[[5,0],[4,3]]")).reason == "separation");
        CHECK(kissing_validate(json::parse("[[1.5,0]]")).reason == "non_integer");
        CHECK(kissing_validate(json::array()).reason == "empty");

        // Scaling by a 60-digit factor keeps every relation exact.
        BigInt big("123456789012345678901234567890123456789012345678901234567890");
        IntegerVectorSet scaled;
        for (const auto& v : d4["vectors"]) {
            std::vector<BigInt> row;
            for (const auto& x : v)
                row.push_back(BigInt(x.get<long long>()) * big);
            scaled.vectors.push_back(row);
        }
        CHECK(kissing_validate(scaled, 4).metrics.at("num_vectors") == 24);
        json tagged = json::array();
        for (const auto& row : scaled.vectors) {
            json jr = json::array();
            for (const auto& x : row)
                jr.push_back(bigint_to_json(x));
            tagged.push_back(jr);
        }
        CHECK(tagged[0][0].is_object() == (scaled.vectors[0][0] != 0));
        CHECK(kissing_validate(tagged, 4).valid());
    }

    TEST_CASE("bin packing")
    {
        std::vector<double> items{60, 50, 40, 30, 20};
        CHECK(binpacking_lower_bound(items, 100) == 2);
        CHECK(first_fit(items, 100) == PackingAssignment{0, 1, 0, 1, 1});
        CHECK(binpacking_exact_optimum(items, 100) == 2u);
        CHECK(binpacking_exact_optimum(std::vector<double>(16, 1.0), 100) == std::nullopt);
        CHECK_THROWS_AS(binpacking_lower_bound({150.0}, 100), Error);

        std::vector<PackingInstance> inst{{items, 100}};
        auto r = binpacking_validate(std::vector<PackingAssignment>{{0, 0, 1, 1, 1}}, inst);
        CHECK(r.reason == "capacity");
        r = binpacking_validate(std::vector<PackingAssignment>{{0, 2, 1, 1, 0}}, inst);
        CHECK(r.reason == "online");
        r = binpacking_validate(std::vector<PackingAssignment>{{0, 1, 1, 0, 2}}, inst);
        REQUIRE(r.valid());
        CHECK(r.metrics.at("excess_fraction") == 0.5);
        CHECK(r.metrics.at("excess_bins") == 1.0);
        CHECK(binpacking_validate(json::parse("[[0,1]]"), inst).reason == "length");
        CHECK(binpacking_validate(json::parse("[[0,1,1,0,-2]]"), inst).reason == "malformed");

        auto gen = generate_uniform_instances(3, 50, 9);
        REQUIRE(gen.size() == 3);
        for (const auto& g : gen) {
            CHECK(g.capacity == 150.0);
            for (double x : g.items)
                CHECK((x >= 20 && x <= 100 && x == std::floor(x)));
        }
        CHECK(instances_from_json(instances_to_json(gen))[2].items == gen[2].items);
        for (const auto& g : generate_weibull_instances(2, 200, 4))
            for (double x : g.items)
                CHECK((x >= 1 && x <= 100));
    }

    TEST_CASE("toy objective")
    {
        auto r = toy_quadratic_validate(json(0.7));
        CHECK(r.metrics.at("score") == 1.0);
        CHECK(toy_quadratic_validate(json(0.3)).metrics.at("score") == doctest::Approx(0.84));
        CHECK(toy_quadratic_validate(json(1.5)).reason == "range");
        CHECK(toy_quadratic_validate(json("x")).reason == "malformed");
    }

    TEST_CASE("yaml conversion types plain scalars")
    {
        auto j = parse_yaml("a: 1\nb: 2.5\nc: true\nd: '1'\ne: ~\nf: [x, 3]\n", "inline");
        CHECK(j["a"] == 1);
        CHECK(j["b"] == 2.5);
        CHECK(j["c"] == true);
        CHECK(j["d"] == "1");
        CHECK(j["e"].is_null());
        CHECK(j["f"] == json::array({"x", 3}));
        CHECK_THROWS_AS(parse_yaml("a: [1, 2", "broken.yaml"), ConfigError);
    }

    TEST_CASE("every shipped problem loads and its seeds validate")
    {
        sandbox::SubprocessExecutor runner({"python3", (testing::fixtures_dir() / "fake_runner.py").string()});
        sandbox::ResourceLimits limits;
        for (const auto& entry : std::filesystem::directory_iterator(testing::source_dir() / "problems")) {
            auto p = load_problem(entry.path());
            CAPTURE(p.name);
            CHECK_FALSE(p.task_description.empty());
            CHECK(find_schema(p.schemas, "loc"));
            CHECK(p.primary().is_primary);
            for (const auto& seed : p.initial_programs) {
                auto r = runner.execute(seed, sandbox::ExecMode::Run, p.context_data, limits);
                REQUIRE_MESSAGE(r.ok(), sandbox::describe(r.outcome));
                auto report = run_builtin_validator(p.validator, r.value(), p.context_data);
                CHECK_MESSAGE(report.valid(), (report.reason + ": " + report.detail));
            }
        }
    }

    TEST_CASE("problem loader reports broken directories")
    {
        testing::TempDir tmp;
        auto dir = tmp.path() / "broken";
        CHECK_THROWS_AS(load_problem(dir), ConfigError);
        testing::write_file(dir / "task_description.txt", "t");
        CHECK_THROWS_WITH_AS(load_problem(dir), doctest::Contains("metrics.yaml"), ConfigError);
        testing::write_file(dir / "metrics.yaml", "builtin: toy_quadratic\nmetrics:\n  - name: score\n    colour: red\n");
        CHECK_THROWS_WITH_AS(load_problem(dir), doctest::Contains("colour"), ConfigError);
        testing::write_file(dir / "metrics.yaml",
                            "builtin: nosuch\nmetrics:\n  - name: score\n    bounds: [0, 1]\n    is_primary: true\n");
        CHECK_THROWS_WITH_AS(load_problem(dir), doctest::Contains("nosuch"), ConfigError);
        testing::write_file(dir / "metrics.yaml",
                            "builtin: toy_quadratic\nmetrics:\n  - name: score\n    bounds: [0, 1]\n    is_primary: true\n");
        CHECK_THROWS_WITH_AS(load_problem(dir), doctest::Contains("initial_programs"), ConfigError);
        testing::write_file(dir / "initial_programs" / "a.py", "def entrypoint():\n    return 0.5\n");
        auto p = load_problem(dir);
        CHECK(p.initial_programs.size() == 1);
        CHECK(p.context_data.is_null());
    }
}
