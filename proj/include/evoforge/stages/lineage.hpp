#pragma once

#include "evoforge/mutation/context.hpp"
#include "evoforge/mutation/router.hpp"
#include "evoforge/problems/problem.hpp"
#include "evoforge/stages/services.hpp"

namespace evoforge::stages {

/// Primary-metric change from parent to child; positive means better unless
/// `raw` is set, in which case it is child - parent.
double primary_delta(const Metrics& parent, const Metrics& child, const MetricSchema& primary, bool raw = false);

std::string lineage_prompt(const problems::ProblemContext& problem, const Program& parent, const Program& child,
                           double delta);

/// Analysis of one parent -> child transition. The delta is computed here;
/// the model only writes the explanation, which stays empty when the model
/// is unavailable or `router` is null. Throws Error when `parent` is not a
/// parent of `child` or either lacks metrics.
mutation::LineageAnalysis lineage_transition(const problems::ProblemContext& problem, const Program& parent,
                                             const Program& child, mutation::ModelRouter* router, Rng& rng,
                                             bool raw_delta = false);

enum class RelativeDirection { Ancestors, Descendants };

/// Breadth-first walk (ancestors via parent_ids, descendants via the reverse
/// index) up to `depth` levels, keeping evaluated programs only, ranked by
/// strategy and cut to k. Ties go to the older program.
std::vector<ProgramId> select_relatives(const Program& program, RelativeDirection direction,
                                        RelativeStrategy strategy, std::size_t k, store::ProgramStore& store,
                                        const MetricSchema& primary, std::size_t depth = 5);

} // namespace evoforge::stages
