#include "evoforge/orchestrator/config.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/problems/problem.hpp"
#include "evoforge/problems/yaml_json.hpp"
#include "evoforge/stages/registry.hpp"

#include <algorithm>
#include <cstdlib>

namespace evoforge::orchestrator {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

bool is_group(std::string_view key)
{
    return std::find(kConfigGroups.begin(), kConfigGroups.end(), key) != kConfigGroups.end();
}

json load_tree(const fs::path& path)
{
    json doc = load_yaml_file(path);
    if (doc.is_null())
        return json::object();
    if (!doc.is_object())
        throw ConfigError(path.string() + ": expected a mapping at the top level");
    return doc;
}

std::string type_name(const json& j)
{
    if (j.is_boolean())
        return "boolean";
    if (j.is_number_integer())
        return "integer";
    if (j.is_number())
        return "number";
    if (j.is_string())
        return "string";
    if (j.is_array())
        return "list";
    if (j.is_object())
        return "mapping";
    return "null";
}

/// Rejects keys absent from `reference` and values of a different type.
void check_against(const json& reference, const json& value, const std::string& path)
{
    if (reference.is_null())
        return;
    bool ok = true;
    if (reference.is_object())
        ok = value.is_object();
    else if (reference.is_array())
        ok = value.is_array();
    else if (reference.is_boolean())
        ok = value.is_boolean();
    else if (reference.is_number_integer())
        ok = value.is_number_integer();
    else if (reference.is_number())
        ok = value.is_number();
    else if (reference.is_string())
        ok = value.is_string();
    if (!ok)
        throw ConfigError("config key '" + path + "' expects a " + type_name(reference) + ", got " +
                          type_name(value));
    if (!reference.is_object())
        return;
    for (const auto& [k, v] : value.items()) {
        std::string child = path.empty() ? k : path + "." + k;
        if (!reference.contains(k))
            throw ConfigError("unknown config key '" + child + "'");
        check_against(reference[k], v, child);
    }
}

struct Profile {
    json values = json::object();
    json groups = json::object();
};

Profile load_profile(const fs::path& root, const std::string& name, std::vector<std::string>& chain)
{
    if (std::find(chain.begin(), chain.end(), name) != chain.end())
        throw ConfigError("profile '" + name + "' extends itself");
    chain.push_back(name);
    const auto path = root / "profiles" / (name + ".yaml");
    if (!fs::exists(path))
        throw ConfigError("unknown profile '" + name + "' (no " + path.string() + ")");
    json doc = load_tree(path);
    Profile out;
    if (doc.contains("extends")) {
        if (!doc["extends"].is_string())
            throw ConfigError(path.string() + ": 'extends' must be a profile name");
        out = load_profile(root, doc["extends"].get<std::string>(), chain);
        doc.erase("extends");
    }
    if (doc.contains("groups")) {
        deep_merge(out.groups, doc["groups"]);
        doc.erase("groups");
    }
    deep_merge(out.values, doc);
    return out;
}

json parse_override_value(const std::string& text, const json& reference, const std::string& origin)
{
    if (reference.is_string())
        return text;
    if (text.empty())
        return "";
    return parse_yaml(text, origin);
}

const json* find_reference(const json& defaults, const std::vector<std::string>& path)
{
    const json* node = &defaults;
    for (const auto& part : path) {
        if (node->is_null())
            return node;
        if (!node->is_object() || !node->contains(part))
            return nullptr;
        node = &(*node)[part];
    }
    return node;
}

std::vector<std::string> split_dotted(const std::string& key)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto dot = key.find('.', start);
        out.push_back(key.substr(start, dot - start));
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    return out;
}

fs::path resolve_existing(const std::string& text, const fs::path& data_dir)
{
    if (text.empty())
        return {};
    fs::path p(text);
    if (p.is_absolute() || fs::exists(p))
        return p;
    return data_dir / p;
}

template <typename T>
T get_size(const json& j, const char* key, const std::string& section)
{
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw ConfigError("config key '" + section + "." + key + "' must be a non-negative integer");
    return v.get<T>();
}

} // namespace

fs::path default_data_dir()
{
    if (const char* env = std::getenv("EVOFORGE_DATA_DIR"); env && *env)
        return env;
#ifdef EVOFORGE_DEFAULT_DATA_DIR
    return EVOFORGE_DEFAULT_DATA_DIR;
#else
    return fs::current_path();
#endif
}

void deep_merge(json& into, const json& from)
{
    if (!into.is_object() || !from.is_object()) {
        into = from;
        return;
    }
    for (const auto& [k, v] : from.items()) {
        if (into.contains(k) && into[k].is_object() && v.is_object())
            deep_merge(into[k], v);
        else
            into[k] = v;
    }
}

json compose_tree(const fs::path& config_root, const std::string& profile, const std::vector<std::string>& overrides)
{
    const auto defaults_path = config_root / "defaults.yaml";
    if (!fs::exists(defaults_path))
        throw ConfigError("missing " + defaults_path.string());
    const json defaults = load_tree(defaults_path);

    std::vector<std::string> chain;
    Profile prof = load_profile(config_root, profile, chain);

    json groups = defaults.value("groups", json::object());
    deep_merge(groups, prof.groups);
    std::vector<std::pair<std::vector<std::string>, std::string>> value_overrides;
    for (const auto& o : overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override '" + o + "' is not of the form key=value");
        std::string key = o.substr(0, eq);
        std::string value = o.substr(eq + 1);
        if (is_group(key))
            groups[key] = value;
        else
            value_overrides.emplace_back(split_dotted(key), value);
    }

    json tree = defaults;
    for (const auto& [group, option] : groups.items()) {
        if (!is_group(group))
            throw ConfigError("unknown config group '" + group + "'");
        if (!option.is_string())
            throw ConfigError("config group '" + group + "' must name an option");
        const auto path = config_root / group / (option.get<std::string>() + ".yaml");
        if (!fs::exists(path))
            throw ConfigError("unknown option '" + option.get<std::string>() + "' for config group '" + group +
                              "'");
        json part = load_tree(path);
        check_against(defaults[group], part, group);
        deep_merge(tree[group], part);
    }
    tree["groups"] = groups;

    check_against(defaults, prof.values, "");
    deep_merge(tree, prof.values);

    for (const auto& [path, text] : value_overrides) {
        std::string dotted;
        for (const auto& p : path)
            dotted += (dotted.empty() ? "" : ".") + p;
        const json* reference = find_reference(defaults, path);
        if (!reference)
            throw ConfigError("unknown config key '" + dotted + "'");
        json value = parse_override_value(text, *reference, "override '" + dotted + "'");
        check_against(*reference, value, dotted);
        json* node = &tree;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            node = &(*node)[path[i]];
        (*node)[path.back()] = std::move(value);
    }
    tree["profile"] = profile;
    return tree;
}

mutation::ModelRoute route_from_json(const json& j)
{
    mutation::ModelRoute r;
    try {
        r.stage_kind = mutation::stage_kind_from_string(j.at("stage_kind").get<std::string>());
        r.model_id = j.at("model_id").get<std::string>();
        r.endpoint = j.value("endpoint", std::string());
        r.temperature = j.value("temperature", r.temperature);
        r.max_tokens = j.value("max_tokens", r.max_tokens);
        r.weight = j.value("weight", r.weight);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed LLM route: ") + e.what());
    }
    r.validate();
    return r;
}

json route_to_json(const mutation::ModelRoute& r)
{
    return json{{"stage_kind", mutation::to_string(r.stage_kind)},
                {"model_id", r.model_id},
                {"endpoint", r.endpoint},
                {"temperature", r.temperature},
                {"max_tokens", r.max_tokens},
                {"weight", r.weight}};
}

RunConfig parse_run_config(const json& tree, const fs::path& data_dir)
{
    RunConfig c;
    c.tree = tree;
    c.profile = tree.value("profile", std::string());
    try {
        const auto& p = tree.at("problem");
        c.problem_name = p.at("name").get<std::string>();
        auto dir = p.at("dir").get<std::string>();
        c.problem_dir = dir.empty() ? data_dir / "problems" / c.problem_name : resolve_existing(dir, data_dir);
        if (!dir.empty())
            c.problem_name = c.problem_dir.filename().string();
        if (auto ns = p.at("seed_namespace").get<std::string>(); !ns.empty())
            c.seed_namespace = ns;
        c.seed_from = resolve_existing(p.at("seed_from").get<std::string>(), data_dir);

        const auto& a = tree.at("algorithm");
        c.algorithm.kind = a.at("kind").get<std::string>();
        if (c.algorithm.kind != "single_island" && c.algorithm.kind != "multi_island")
            throw ConfigError("algorithm.kind must be single_island or multi_island");
        c.algorithm.bins = get_size<std::uint32_t>(a, "bins", "algorithm");
        for (const auto& i : a.at("islands")) {
            IslandConfig island;
            island.id = i.at("id").get<std::string>();
            if (i.contains("dims"))
                island.space.dims = i["dims"].get<std::vector<evolution::BehaviorDim>>();
            island.space.validity_dim = i.value("validity_dim", true);
            c.algorithm.islands.push_back(std::move(island));
        }
        c.algorithm.migration_interval = get_size<std::size_t>(a, "migration_interval", "algorithm");
        c.algorithm.migration_top_k = get_size<std::size_t>(a, "migration_top_k", "algorithm");
        c.algorithm.batch = get_size<std::size_t>(a, "batch", "algorithm");
        c.algorithm.parents_per_offspring = get_size<std::size_t>(a, "parents_per_offspring", "algorithm");
        c.algorithm.mutation_mode = a.at("mutation_mode").get<std::string>();
        (void)mutation::mutation_mode_from_string(c.algorithm.mutation_mode);

        const auto& l = tree.at("llm");
        c.llm.kind = l.at("kind").get<std::string>();
        if (c.llm.kind != "mock" && c.llm.kind != "http")
            throw ConfigError("llm.kind must be mock or http");
        c.llm.mock_script = resolve_existing(l.at("mock_script").get<std::string>(), data_dir);
        for (const auto& r : l.at("routes"))
            c.llm.routes.push_back(route_from_json(r));
        const auto& retry = l.at("retry");
        c.llm.retry.max_attempts = retry.at("max_attempts").get<int>();
        c.llm.retry.initial_backoff = std::chrono::milliseconds(retry.at("initial_backoff_ms").get<std::int64_t>());
        c.llm.retry.multiplier = retry.at("multiplier").get<double>();
        c.llm.retry.max_backoff = std::chrono::milliseconds(retry.at("max_backoff_ms").get<std::int64_t>());
        c.llm.max_in_flight = get_size<std::size_t>(l, "max_in_flight", "llm");
        c.llm.api_key_env = l.at("api_key_env").get<std::string>();

        const auto& d = tree.at("dag");
        auto topology = d.at("topology").get<std::string>();
        if (topology == "default")
            c.dag = stages::default_pipeline();
        else
            c.dag = dag::dag_from_json(load_yaml_file(resolve_existing(topology, data_dir)));

        const auto& e = tree.at("execution");
        c.execution.seed = e.at("seed").get<std::uint64_t>();
        c.execution.limits.wall_timeout = std::chrono::milliseconds(e.at("wall_timeout_ms").get<std::int64_t>());
        c.execution.limits.memory_cap = e.at("memory_cap_mb").get<std::uint64_t>() << 20;
        c.execution.limits.output_cap = get_size<std::size_t>(e, "output_cap_bytes", "execution");
        c.execution.limits.validate();
        c.execution.max_programs = get_size<std::size_t>(e, "max_programs", "execution");
        c.execution.max_stages = get_size<std::size_t>(e, "max_stages", "execution");
        c.execution.mutation_threads = get_size<std::size_t>(e, "mutation_threads", "execution");
        c.execution.single_threaded = e.at("single_threaded").get<bool>();
        if (c.execution.single_threaded) {
            c.execution.max_programs = 1;
            c.execution.max_stages = 1;
            c.execution.mutation_threads = 1;
        }
        if (c.execution.max_programs == 0 || c.execution.max_stages == 0 || c.execution.mutation_threads == 0)
            throw ConfigError("execution parallelism caps must be positive");
        c.execution.executor = e.at("executor").get<std::string>();
        if (c.execution.executor != "subprocess" && c.execution.executor != "literal")
            throw ConfigError("execution.executor must be subprocess or literal");
        c.execution.interpreter = e.at("interpreter").get<std::vector<std::string>>();

        const auto& s = tree.at("store");
        auto backend = s.at("backend").get<std::string>();
        if (backend == "memory")
            c.store = store::InMemoryBackend{};
        else if (backend == "kv")
            c.store = store::ExternalKvBackend{s.at("address").get<std::string>()};
        else
            throw ConfigError("store.backend must be memory or kv");
        c.namespace_name = s.at("namespace").get<std::string>();
        if (c.namespace_name.empty())
            c.namespace_name = c.problem_name + "-s" + std::to_string(c.execution.seed);

        const auto& b = tree.at("budget");
        c.budget.max_generations = get_size<std::size_t>(b, "max_generations", "budget");
        if (auto calls = get_size<std::size_t>(b, "max_llm_calls", "budget"); calls > 0)
            c.budget.max_llm_calls = calls;

        const auto& x = tree.at("context");
        c.lineage.strategy = stages::relative_strategy_from_string(x.at("strategy").get<std::string>());
        c.lineage.k = get_size<std::size_t>(x, "k", "context");
        c.lineage.ancestor_depth = get_size<std::size_t>(x, "ancestor_depth", "context");
        c.lineage.descendant_depth = get_size<std::size_t>(x, "descendant_depth", "context");
        c.lineage.raw_delta = x.at("raw_delta").get<bool>();
        c.caps.code_chars = get_size<std::size_t>(x, "code_chars", "context");
        c.caps.max_insights = get_size<std::size_t>(x, "max_insights", "context");
        c.caps.max_analyses = get_size<std::size_t>(x, "max_analyses", "context");
        c.max_insights = get_size<std::size_t>(x, "insights_per_program", "context");
        c.max_prompt_chars = get_size<std::size_t>(x, "max_prompt_chars", "context");

        c.runs_dir = tree.at("output").at("runs_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    return c;
}

RunConfig compose_config(const fs::path& config_root, const std::string& profile,
                         const std::vector<std::string>& overrides)
{
    return parse_run_config(compose_tree(config_root, profile, overrides), config_root.parent_path());
}

void validate_run_config(const RunConfig& config)
{
    dag::require_valid(config.dag);
    auto problem = problems::load_problem(config.problem_dir, config.seed_namespace);
    for (const auto& island : config.algorithm.islands)
        if (!island.space.dims.empty())
            island.space.validate(problem.schemas);
    if (config.algorithm.kind == "multi_island" && config.algorithm.islands.size() < 2)
        throw ConfigError("multi_island needs at least two islands");
    if (config.algorithm.batch == 0)
        throw ConfigError("algorithm.batch must be positive");
    if (config.algorithm.parents_per_offspring == 0)
        throw ConfigError("algorithm.parents_per_offspring must be positive");
    if (config.llm.kind == "mock") {
        if (!config.llm.mock_script.empty() && !fs::exists(config.llm.mock_script))
            throw ConfigError("mock script " + config.llm.mock_script.string() + " does not exist");
    } else if (config.llm.routes.empty()) {
        throw ConfigError("llm.kind http needs at least one route");
    }
    if (config.execution.executor == "subprocess" && config.execution.interpreter.empty())
        throw ConfigError("execution.interpreter must not be empty");
    if (!config.seed_from.empty() && !fs::exists(config.seed_from))
        throw ConfigError("seed archive " + config.seed_from.string() + " does not exist");
}

} // namespace evoforge::orchestrator
