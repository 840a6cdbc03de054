#include "evoforge/dag/engine.hpp"

#include "evoforge/core/digest.hpp"
#include "evoforge/core/error.hpp"

#include <condition_variable>
#include <exception>
#include <set>
#include <thread>

namespace evoforge::dag {

using json = nlohmann::json;

json outcome_to_json(const StageOutcome& outcome)
{
    return std::visit(
        [](const auto& o) -> json {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Done>)
                return json{{"status", "done"}, {"value", o.value}};
            else if constexpr (std::is_same_v<T, Skipped>)
                return json{{"status", "skipped"}, {"reason", o.reason}};
            else
                return json{{"status", "errored"}, {"message", o.message}, {"trace", o.trace}};
        },
        outcome);
}

StageOutcome outcome_from_json(const json& j)
{
    const auto status = j.at("status").get<std::string>();
    if (status == "done")
        return Done{j.value("value", json())};
    if (status == "skipped")
        return Skipped{j.value("reason", std::string())};
    if (status == "errored")
        return Errored{j.value("message", std::string()), j.value("trace", std::string())};
    throw Error("unknown stage status '" + status + "'");
}

json outcomes_to_json(const OutcomeMap& outcomes)
{
    json j = json::object();
    for (const auto& [name, o] : outcomes)
        j[name] = outcome_to_json(o);
    return j;
}

const json& StageContext::input(std::string_view name) const
{
    auto it = inputs.find(name);
    if (it == inputs.end())
        throw Error("stage '" + std::string(stage_name) + "' has no input '" + std::string(name) + "'");
    return *it->second;
}

const StageOutcome* StageContext::optional_outcome(std::string_view name) const
{
    auto it = optional.find(name);
    return it == optional.end() ? nullptr : it->second;
}

std::string stage_cache_key(const StageSpec& spec, const Stage& stage, const Program& program,
                            const StageContext& ctx)
{
    json material{{"stage", spec.name},
                  {"kind", spec.kind},
                  {"params", spec.params},
                  {"config", stage.config_digest()},
                  {"source", sha256_hex(program.source)}};
    json inputs = json::object();
    for (const auto& [name, value] : ctx.inputs)
        inputs[name] = *value;
    json optional = json::object();
    for (const auto& [name, outcome] : ctx.optional)
        optional[name] = outcome_to_json(*outcome);
    material["inputs"] = std::move(inputs);
    material["optional"] = std::move(optional);
    return sha256_hex(material.dump());
}

DagEngine::DagEngine(StageDAG dag, StageMap stages, std::shared_ptr<store::ProgramStore> store,
                     EngineOptions options)
    : dag_(std::move(dag)), stages_(std::move(stages)), store_(std::move(store)), options_(options)
{
    order_ = topological_order(dag_);
    for (const auto& s : dag_.stages)
        if (!stages_.count(s.name) || !stages_.at(s.name))
            throw ConfigError("stage '" + s.name + "' (kind '" + s.kind + "') has no implementation");
    if (options_.max_programs == 0 || options_.max_stages == 0)
        throw ConfigError("parallelism caps must be positive");
    if (!store_)
        throw ConfigError("DAG engine needs a program store");
}

std::shared_ptr<std::mutex> DagEngine::program_lock(const ProgramId& id)
{
    std::lock_guard g(locks_mutex_);
    auto& slot = locks_[id];
    auto lock = slot.lock();
    if (!lock) {
        lock = std::make_shared<std::mutex>();
        slot = lock;
    }
    return lock;
}

RunRecord DagEngine::run_program(const Program& program, const json& externals, const Finalizer& finalize)
{
    return run(program, externals, false, finalize);
}

RunRecord DagEngine::cached_run(const Program& program, const json& externals, const Finalizer& finalize)
{
    return run(program, externals, true, finalize);
}

RunRecord DagEngine::run(const Program& given, const json& externals, bool use_cache, const Finalizer& finalize)
{
    for (const auto& e : dag_.external_inputs)
        if (!externals.is_object() || !externals.contains(e))
            throw ConfigError("external input '" + e + "' was not supplied");

    auto lock = program_lock(given.id);
    std::lock_guard program_guard(*lock);
    const Program program = store_->get_program(given.id).value_or(given);

    struct Shared {
        std::mutex m;
        std::condition_variable cv;
        OutcomeMap outcomes;
        std::set<std::string> started;
        std::map<std::string, std::string> cache_keys;
        RunRecord record;
    } sh;
    sh.record.program_id = program.id;

    auto process = [&](const StageSpec& spec, std::string& cache_key, bool& hit) -> StageOutcome {
        StageContext ctx{program, spec.name, spec.params, {}, {}};
        {
            std::lock_guard g(sh.m);
            for (const auto& in : spec.data_inputs) {
                auto it = sh.outcomes.find(in);
                if (it == sh.outcomes.end()) {
                    ctx.inputs[in] = &externals[in];
                    continue;
                }
                if (std::holds_alternative<Skipped>(it->second))
                    return Skipped{"input '" + in + "' was skipped"};
                if (std::holds_alternative<Errored>(it->second))
                    return Skipped{"input '" + in + "' errored"};
                ctx.inputs[in] = &std::get<Done>(it->second).value;
            }
            for (const auto& in : spec.optional_inputs)
                ctx.optional[in] = &sh.outcomes.at(in);

            const auto& pc = spec.precondition;
            bool pass = true;
            if (pc.kind == Precondition::Kind::Exists) {
                pass = is_done(sh.outcomes.at(pc.stage));
            } else if (pc.kind == Precondition::Kind::Compare) {
                const auto& o = sh.outcomes.at(pc.stage);
                const json* v = is_done(o) ? find_path(std::get<Done>(o).value, pc.field) : nullptr;
                pass = v && compare_json(*v, pc.op, pc.value);
            } else if (pc.kind == Precondition::Kind::Metric) {
                auto m = program.metric(pc.field);
                pass = m && compare_json(json(*m), pc.op, pc.value);
            }
            if (!pass)
                return Skipped{"precondition not met: " + pc.describe()};
        }

        const auto& stage = *stages_.at(spec.name);
        cache_key = stage_cache_key(spec, stage, program, ctx);
        if (use_cache && stage.cacheable() && program.stage_outputs.is_object()) {
            auto it = program.stage_outputs.find(spec.name);
            if (it != program.stage_outputs.end() && it->is_object() && it->value("status", "") == "done" &&
                it->value("cache_key", "") == cache_key) {
                hit = true;
                return Done{it->value("value", json())};
            }
        }
        try {
            return Done{stages_.at(spec.name)->run(ctx)};
        } catch (const StageFailure& e) {
            return Errored{e.what(), e.trace()};
        } catch (const std::exception& e) {
            return Errored{e.what(), ""};
        }
    };

    auto ready = [&](const StageSpec& s) {
        for (const auto* list : {&s.data_inputs, &s.optional_inputs, &s.order_after})
            for (const auto& p : *list)
                if (dag_.find(p) && !sh.outcomes.count(p))
                    return false;
        return true;
    };

    auto worker = [&] {
        std::unique_lock lk(sh.m);
        while (sh.outcomes.size() < order_.size()) {
            const StageSpec* next = nullptr;
            for (const auto& name : order_) {
                const auto* s = dag_.find(name);
                if (!sh.started.count(name) && ready(*s)) {
                    next = s;
                    break;
                }
            }
            if (!next) {
                if (sh.started.size() == order_.size())
                    break;
                sh.cv.wait(lk);
                continue;
            }
            sh.started.insert(next->name);
            TraceEvent ev{next->name, ++clock_, 0, false};
            lk.unlock();

            std::string key;
            bool hit = false;
            StageOutcome outcome = process(*next, key, hit);

            lk.lock();
            ev.end = ++clock_;
            ev.executed = is_done(outcome) && !hit;
            if (std::holds_alternative<Errored>(outcome))
                ev.executed = true;
            if (ev.executed)
                ++sh.record.executed;
            if (hit)
                ++sh.record.cache_hits;
            if (!key.empty())
                sh.cache_keys[next->name] = key;
            sh.record.trace.push_back(ev);
            sh.outcomes.emplace(next->name, std::move(outcome));
            sh.cv.notify_all();
        }
        sh.cv.notify_all();
    };

    const std::size_t n_workers = std::min(options_.max_stages, order_.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_workers; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    sh.record.outcomes = sh.outcomes;
    store::update_program(*store_, program.id, [&](Program& p) {
        if (!p.stage_outputs.is_object())
            p.stage_outputs = json::object();
        for (const auto& [name, outcome] : sh.outcomes) {
            json entry = outcome_to_json(outcome);
            if (is_done(outcome)) {
                auto k = sh.cache_keys.find(name);
                if (k != sh.cache_keys.end())
                    entry["cache_key"] = k->second;
            }
            p.stage_outputs[name] = std::move(entry);
        }
        if (finalize)
            finalize(p, sh.outcomes);
    });
    return std::move(sh.record);
}

std::vector<RunRecord> DagEngine::run_batch(const std::vector<Program>& programs, const json& externals,
                                            bool use_cache, const Finalizer& finalize)
{
    std::vector<RunRecord> out(programs.size());
    std::vector<std::exception_ptr> errors(programs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < programs.size(); i = next++) {
            try {
                out[i] = run(programs[i], externals, use_cache, finalize);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::min(options_.max_programs, programs.size());
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

} // namespace evoforge::dag
