#pragma once

#include "evoforge/core/random.hpp"
#include "evoforge/mutation/llm_client.hpp"

#include <atomic>
#include <condition_variable>
#include <memory>

namespace evoforge::mutation {

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    double multiplier = 2.0;
    std::chrono::milliseconds max_backoff{8'000};
};

/// Weighted routing of prompts to the clients registered for a stage kind,
/// with retries, a global in-flight cap and an optional call budget.
class ModelRouter {
public:
    ModelRouter(std::vector<std::shared_ptr<LlmClient>> clients, RetryPolicy retry = {},
                std::size_t max_in_flight = 8, std::optional<std::size_t> call_budget = std::nullopt);

    /// Samples a route by weight, then calls it, retrying TransportError with
    /// exponential backoff. Throws LlmUnavailable when no route exists, the
    /// budget is spent or every attempt failed.
    std::string route_and_call(StageKind kind, std::string_view prompt, Rng& rng);

    /// Index into clients() of the route picked for one draw.
    std::size_t sample_route(StageKind kind, Rng& rng) const;

    bool has_route(StageKind kind) const;
    const std::vector<std::shared_ptr<LlmClient>>& clients() const { return clients_; }

    /// Attempts made (each retry counts).
    std::size_t calls() const { return calls_; }
    std::size_t failed_calls() const { return failed_; }
    bool budget_exhausted() const;

private:
    std::vector<std::shared_ptr<LlmClient>> clients_;
    RetryPolicy retry_;
    std::size_t max_in_flight_;
    std::optional<std::size_t> budget_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> failed_{0};
    std::mutex m_;
    std::condition_variable cv_;
    std::size_t in_flight_ = 0;
};

} // namespace evoforge::mutation
