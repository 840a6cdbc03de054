#pragma once

#include "evoforge/core/error.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace evoforge::mutation {

enum class StageKind { Mutation, Insights, Lineage };

std::string_view to_string(StageKind k);
StageKind stage_kind_from_string(std::string_view s);

struct ModelRoute {
    StageKind stage_kind = StageKind::Mutation;
    std::string model_id;
    std::string endpoint;
    double temperature = 0.7;
    int max_tokens = 4096;
    double weight = 1.0;

    /// Throws ConfigError for negative temperature, non-positive tokens or
    /// weight.
    void validate() const;
};

/// Retryable failure (connection refused, timeout, 429, 5xx).
class TransportError : public Error {
public:
    using Error::Error;
};

/// No response obtainable: retries exhausted, non-retryable HTTP status,
/// exhausted budget, or an unscripted mock.
class LlmUnavailable : public Error {
public:
    using Error::Error;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;

    virtual const ModelRoute& route() const = 0;

    /// One attempt. Throws TransportError or LlmUnavailable.
    virtual std::string complete(std::string_view prompt) = 0;
};

/// Deterministic client. Lookup order: exact prompt digest, first `rules`
/// entry whose substring occurs in the prompt, next item of the scripted
/// sequence, default response.
class MockClient final : public LlmClient {
public:
    struct Rule {
        std::string contains;
        std::string response;
    };

    explicit MockClient(ModelRoute route);

    /// {"by_digest": {sha256: text}, "rules": [{"contains", "response"}],
    ///  "sequence": [text], "default": text}
    static std::shared_ptr<MockClient> from_json(ModelRoute route, const nlohmann::json& script);

    void add_digest(const std::string& sha256, std::string response);
    void add_rule(std::string contains, std::string response);
    void push_sequence(std::string response);
    void set_default(std::string response);
    /// The next `n` calls throw TransportError before consulting the script.
    void fail_next(std::size_t n);

    const ModelRoute& route() const override { return route_; }
    std::string complete(std::string_view prompt) override;

    /// Every prompt received, in call order.
    std::vector<std::string> prompts() const;
    std::size_t call_count() const;

private:
    ModelRoute route_;
    mutable std::mutex m_;
    std::map<std::string, std::string> by_digest_;
    std::vector<Rule> rules_;
    std::deque<std::string> sequence_;
    std::optional<std::string> default_;
    std::size_t pending_failures_ = 0;
    std::vector<std::string> prompts_;
};

struct HttpOptions {
    std::string api_key_env = "EVOFORGE_LLM_API_KEY";
    std::chrono::milliseconds connect_timeout{10'000};
    std::chrono::milliseconds read_timeout{120'000};
};

/// OpenAI-compatible chat completions over HTTP(S). The endpoint is either a
/// base URL ("http://host:port/v1") or the full ".../chat/completions" URL.
class HttpClient final : public LlmClient {
public:
    HttpClient(ModelRoute route, HttpOptions options = {});

    const ModelRoute& route() const override { return route_; }
    std::string complete(std::string_view prompt) override;

    /// Request body sent for `prompt`.
    nlohmann::json request_body(std::string_view prompt) const;

    /// choices[0].message.content. Throws LlmUnavailable when absent.
    static std::string extract_content(const nlohmann::json& response);

private:
    ModelRoute route_;
    HttpOptions options_;
    std::string base_;
    std::string path_;
};

} // namespace evoforge::mutation
