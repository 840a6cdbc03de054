#include "evoforge/problems/problem.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/problems/bin_packing.hpp"
#include "evoforge/problems/yaml_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace evoforge::problems {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("missing required file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MetricSchema parse_schema(const json& j, const fs::path& origin)
{
    if (!j.is_object() || !j.contains("name"))
        throw ConfigError(origin.string() + ": every metric needs a name");
    static const std::vector<std::string> known{"name",      "higher_is_better", "bounds",    "precision",
                                                "significance", "is_primary",    "description"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(origin.string() + ": unknown metric field '" + key + "'");
    try {
        return j.get<MetricSchema>();
    } catch (const json::exception& e) {
        throw ConfigError(origin.string() + ": malformed metric '" + j["name"].dump() + "': " + e.what());
    }
}

json expand_context(json ctx, const fs::path& origin)
{
    if (!ctx.is_object() || !ctx.contains("generate"))
        return ctx;
    const auto& g = ctx["generate"];
    try {
        const auto dist = g.at("distribution").get<std::string>();
        const auto count = g.at("count").get<std::size_t>();
        const auto items = g.at("items").get<std::size_t>();
        const auto seed = g.at("seed").get<std::uint64_t>();
        if (dist == "uniform")
            return instances_to_json(generate_uniform_instances(count, items, seed));
        if (dist == "weibull")
            return instances_to_json(generate_weibull_instances(count, items, seed));
        throw ConfigError(origin.string() + ": unknown distribution '" + dist + "'");
    } catch (const json::exception& e) {
        throw ConfigError(origin.string() + ": malformed generate block: " + e.what());
    }
}

} // namespace

ProblemContext load_problem(const fs::path& directory, std::optional<std::string> seed_namespace)
{
    if (!fs::is_directory(directory))
        throw ConfigError("problem directory " + directory.string() + " does not exist");

    ProblemContext ctx;
    ctx.directory = directory;
    ctx.name = directory.filename().string();
    if (ctx.name.empty())
        ctx.name = directory.parent_path().filename().string();
    ctx.task_description = read_text(directory / "task_description.txt");
    ctx.seed_namespace = std::move(seed_namespace);

    const auto metrics_path = directory / "metrics.yaml";
    if (!fs::exists(metrics_path))
        throw ConfigError("missing required file " + metrics_path.string());
    const json spec = load_yaml_file(metrics_path);
    if (!spec.is_object() || !spec.contains("metrics") || !spec["metrics"].is_array())
        throw ConfigError(metrics_path.string() + ": expected a 'metrics' list");
    for (const auto& m : spec["metrics"])
        ctx.schemas.push_back(parse_schema(m, metrics_path));
    if (!find_schema(ctx.schemas, kIsValid)) {
        MetricSchema v;
        v.name = std::string(kIsValid);
        v.precision = 0;
        ctx.schemas.push_back(v);
    }
    if (!find_schema(ctx.schemas, "loc"))
        ctx.schemas.push_back(MetricSchema{"loc", false, 0.0, 400.0, 0, 0.0, false});
    if (!find_schema(ctx.schemas, "chars"))
        ctx.schemas.push_back(MetricSchema{"chars", false, 0.0, 20000.0, 0, 0.0, false});
    try {
        validate_schema_set(ctx.schemas);
    } catch (const ConfigError& e) {
        throw ConfigError(metrics_path.string() + ": " + e.what());
    }

    const auto validate_py = directory / "validate.py";
    if (spec.contains("builtin")) {
        if (!spec["builtin"].is_string())
            throw ConfigError(metrics_path.string() + ": 'builtin' must be a string");
        ctx.validator.builtin = spec["builtin"].get<std::string>();
        if (spec.contains("params"))
            ctx.validator.params = spec["params"];
        try {
            check_builtin_binding(ctx.validator);
        } catch (const ConfigError& e) {
            throw ConfigError(metrics_path.string() + ": " + e.what());
        }
    } else if (fs::exists(validate_py)) {
        ctx.validator.external_source = read_text(validate_py);
        if (spec.contains("params"))
            ctx.validator.params = spec["params"];
    } else {
        throw ConfigError("missing required file " + validate_py.string() + " (or a 'builtin' key in " +
                          metrics_path.string() + ")");
    }
    if (spec.contains("seed_namespace") && !ctx.seed_namespace)
        ctx.seed_namespace = spec["seed_namespace"].get<std::string>();

    const auto seeds_dir = directory / "initial_programs";
    if (fs::is_directory(seeds_dir)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(seeds_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".py")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
            ctx.initial_programs.push_back(read_text(f));
    }
    if (ctx.initial_programs.empty() && !ctx.seed_namespace)
        throw ConfigError(seeds_dir.string() + ": no initial programs and no seed namespace");

    const auto context_path = directory / "context.json";
    if (fs::exists(context_path)) {
        try {
            ctx.context_data = expand_context(json::parse(read_text(context_path)), context_path);
        } catch (const json::parse_error& e) {
            throw ConfigError(context_path.string() + ": " + e.what());
        }
    }
    if (ctx.validator.builtin == "bin_packing") {
        try {
            instances_from_json(ctx.context_data);
        } catch (const Error& e) {
            throw ConfigError(context_path.string() + ": " + e.what());
        }
    }

    const auto prompts_dir = directory / "prompts";
    if (fs::is_directory(prompts_dir)) {
        for (const auto& entry : fs::directory_iterator(prompts_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                ctx.prompt_templates[entry.path().stem().string()] = read_text(entry.path());
    }
    return ctx;
}

} // namespace evoforge::problems
