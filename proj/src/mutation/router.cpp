#include "evoforge/mutation/router.hpp"

#include <cmath>
#include <spdlog/spdlog.h>
#include <thread>

namespace evoforge::mutation {

ModelRouter::ModelRouter(std::vector<std::shared_ptr<LlmClient>> clients, RetryPolicy retry,
                         std::size_t max_in_flight, std::optional<std::size_t> call_budget)
    : clients_(std::move(clients)), retry_(retry), max_in_flight_(max_in_flight), budget_(call_budget)
{
    if (max_in_flight_ == 0)
        throw ConfigError("max_in_flight must be positive");
    if (retry_.max_attempts < 1)
        throw ConfigError("retry.max_attempts must be at least 1");
    for (const auto& c : clients_) {
        if (!c)
            throw ConfigError("null LLM client");
        c->route().validate();
    }
}

bool ModelRouter::has_route(StageKind kind) const
{
    for (const auto& c : clients_)
        if (c->route().stage_kind == kind)
            return true;
    return false;
}

bool ModelRouter::budget_exhausted() const { return budget_ && calls_ >= *budget_; }

std::size_t ModelRouter::sample_route(StageKind kind, Rng& rng) const
{
    double total = 0.0;
    for (const auto& c : clients_)
        if (c->route().stage_kind == kind)
            total += c->route().weight;
    if (total <= 0.0)
        throw LlmUnavailable("no model route for stage kind '" + std::string(to_string(kind)) + "'");
    double u = rng.uniform01() * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < clients_.size(); ++i) {
        if (clients_[i]->route().stage_kind != kind)
            continue;
        last = i;
        if (u < clients_[i]->route().weight)
            return i;
        u -= clients_[i]->route().weight;
    }
    return last;
}

std::string ModelRouter::route_and_call(StageKind kind, std::string_view prompt, Rng& rng)
{
    auto& client = *clients_[sample_route(kind, rng)];
    auto backoff = retry_.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
        {
            std::unique_lock lk(m_);
            cv_.wait(lk, [&] { return in_flight_ < max_in_flight_; });
            if (budget_exhausted())
                throw LlmUnavailable("LLM call budget of " + std::to_string(*budget_) + " exhausted");
            ++in_flight_;
            ++calls_;
        }
        struct Release {
            ModelRouter& r;
            ~Release()
            {
                std::lock_guard g(r.m_);
                --r.in_flight_;
                r.cv_.notify_one();
            }
        };
        try {
            Release release{*this};
            return client.complete(prompt);
        } catch (const TransportError& e) {
            ++failed_;
            last_error = e.what();
            spdlog::warn("{} call to '{}' failed (attempt {}/{}): {}", to_string(kind), client.route().model_id,
                         attempt, retry_.max_attempts, e.what());
        } catch (const LlmUnavailable&) {
            ++failed_;
            throw;
        }
        if (attempt < retry_.max_attempts && backoff.count() > 0) {
            std::this_thread::sleep_for(backoff);
            backoff = std::min(retry_.max_backoff,
                               std::chrono::milliseconds(static_cast<long long>(
                                   std::llround(static_cast<double>(backoff.count()) * retry_.multiplier))));
        }
    }
    throw LlmUnavailable("model '" + client.route().model_id + "' unavailable after " +
                         std::to_string(retry_.max_attempts) + " attempts: " + last_error);
}

} // namespace evoforge::mutation
