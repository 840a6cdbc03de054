#pragma once

#include "evoforge/dag/stage.hpp"
#include "evoforge/dag/stage_dag.hpp"
#include "evoforge/store/program_store.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace evoforge::dag {

struct EngineOptions {
    std::size_t max_programs = 4;
    std::size_t max_stages = 4;
};

struct TraceEvent {
    std::string stage;
    std::uint64_t start = 0; ///< logical ticks, shared by all runs of an engine
    std::uint64_t end = 0;
    bool executed = false;
};

struct RunRecord {
    ProgramId program_id;
    OutcomeMap outcomes;
    std::vector<TraceEvent> trace;
    std::size_t executed = 0;
    std::size_t cache_hits = 0;
};

/// Applied to the stored program inside the same CAS write that persists
/// the stage outputs.
using Finalizer = std::function<void(Program&, const OutcomeMap&)>;

using StageMap = std::map<std::string, std::shared_ptr<Stage>, std::less<>>;

class DagEngine {
public:
    /// `stages` maps every StageSpec name to its implementation. Throws
    /// ConfigError when the DAG is invalid or a stage is unbound.
    DagEngine(StageDAG dag, StageMap stages, std::shared_ptr<store::ProgramStore> store, EngineOptions options = {});

    /// Runs every stage once and persists outcomes into stage_outputs.
    RunRecord run_program(const Program& program, const nlohmann::json& externals, const Finalizer& finalize = {});

    /// As run_program, but a cacheable stage whose key matches the persisted
    /// entry reuses the stored Done value instead of executing.
    RunRecord cached_run(const Program& program, const nlohmann::json& externals, const Finalizer& finalize = {});

    /// Runs several programs, at most max_programs at a time. Results are in
    /// input order.
    std::vector<RunRecord> run_batch(const std::vector<Program>& programs, const nlohmann::json& externals,
                                     bool use_cache, const Finalizer& finalize = {});

    const StageDAG& dag() const { return dag_; }
    const EngineOptions& options() const { return options_; }

private:
    RunRecord run(const Program& program, const nlohmann::json& externals, bool use_cache,
                  const Finalizer& finalize);
    std::shared_ptr<std::mutex> program_lock(const ProgramId& id);

    StageDAG dag_;
    StageMap stages_;
    std::shared_ptr<store::ProgramStore> store_;
    EngineOptions options_;
    std::vector<std::string> order_;
    std::atomic<std::uint64_t> clock_{0};
    std::mutex locks_mutex_;
    std::map<ProgramId, std::weak_ptr<std::mutex>> locks_;
};

/// Cache key for one stage execution: SHA-256 over the stage name, kind,
/// params, config digest, program source and every input value.
std::string stage_cache_key(const StageSpec& spec, const Stage& stage, const Program& program,
                            const StageContext& ctx);

} // namespace evoforge::dag
