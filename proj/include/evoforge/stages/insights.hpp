#pragma once

#include "evoforge/mutation/context.hpp"
#include "evoforge/mutation/router.hpp"
#include "evoforge/problems/problem.hpp"

#include <optional>

namespace evoforge::stages {

struct InsightRequest {
    const problems::ProblemContext& problem;
    const Program& program;
    const Metrics& metrics;
    std::optional<std::string> error_trace;
    std::size_t max_insights = 8;
};

std::string insights_prompt(const InsightRequest& request);

/// Prompts the insights route and parses the reply. Model failures yield an
/// empty list and a logged warning.
std::vector<mutation::Insight> generate_insights(const InsightRequest& request, mutation::ModelRouter& router,
                                                 Rng& rng);

} // namespace evoforge::stages
