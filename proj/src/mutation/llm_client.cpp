#include "evoforge/mutation/llm_client.hpp"

#include "evoforge/core/digest.hpp"

namespace evoforge::mutation {

std::string_view to_string(StageKind k)
{
    switch (k) {
    case StageKind::Mutation:
        return "mutation";
    case StageKind::Insights:
        return "insights";
    case StageKind::Lineage:
        return "lineage";
    }
    return "?";
}

StageKind stage_kind_from_string(std::string_view s)
{
    for (auto k : {StageKind::Mutation, StageKind::Insights, StageKind::Lineage})
        if (to_string(k) == s)
            return k;
    throw ConfigError("unknown stage kind '" + std::string(s) + "' (expected mutation, insights or lineage)");
}

void ModelRoute::validate() const
{
    if (temperature < 0.0)
        throw ConfigError("route '" + model_id + "': temperature must be >= 0");
    if (max_tokens <= 0)
        throw ConfigError("route '" + model_id + "': max_tokens must be positive");
    if (!(weight > 0.0))
        throw ConfigError("route '" + model_id + "': weight must be positive");
}

MockClient::MockClient(ModelRoute route) : route_(std::move(route)) {}

std::shared_ptr<MockClient> MockClient::from_json(ModelRoute route, const nlohmann::json& script)
{
    auto client = std::make_shared<MockClient>(std::move(route));
    if (script.is_null())
        return client;
    if (!script.is_object())
        throw ConfigError("mock script must be a mapping");
    if (script.contains("by_digest"))
        for (const auto& [digest, text] : script["by_digest"].items())
            client->add_digest(digest, text.get<std::string>());
    if (script.contains("rules"))
        for (const auto& r : script["rules"])
            client->add_rule(r.at("contains").get<std::string>(), r.at("response").get<std::string>());
    if (script.contains("sequence"))
        for (const auto& text : script["sequence"])
            client->push_sequence(text.get<std::string>());
    if (script.contains("default") && script["default"].is_string())
        client->set_default(script["default"].get<std::string>());
    return client;
}

void MockClient::add_digest(const std::string& sha256, std::string response)
{
    std::lock_guard g(m_);
    by_digest_[sha256] = std::move(response);
}

void MockClient::add_rule(std::string contains, std::string response)
{
    std::lock_guard g(m_);
    rules_.push_back({std::move(contains), std::move(response)});
}

void MockClient::push_sequence(std::string response)
{
    std::lock_guard g(m_);
    sequence_.push_back(std::move(response));
}

void MockClient::set_default(std::string response)
{
    std::lock_guard g(m_);
    default_ = std::move(response);
}

void MockClient::fail_next(std::size_t n)
{
    std::lock_guard g(m_);
    pending_failures_ = n;
}

std::string MockClient::complete(std::string_view prompt)
{
    std::lock_guard g(m_);
    prompts_.emplace_back(prompt);
    if (pending_failures_ > 0) {
        --pending_failures_;
        throw TransportError("scripted transport failure");
    }
    if (!by_digest_.empty()) {
        auto it = by_digest_.find(sha256_hex(prompt));
        if (it != by_digest_.end())
            return it->second;
    }
    for (const auto& r : rules_)
        if (prompt.find(r.contains) != std::string_view::npos)
            return r.response;
    if (!sequence_.empty()) {
        auto text = std::move(sequence_.front());
        sequence_.pop_front();
        return text;
    }
    if (default_)
        return *default_;
    throw LlmUnavailable("mock model '" + route_.model_id + "' has no scripted response");
}

std::vector<std::string> MockClient::prompts() const
{
    std::lock_guard g(m_);
    return prompts_;
}

std::size_t MockClient::call_count() const
{
    std::lock_guard g(m_);
    return prompts_.size();
}

} // namespace evoforge::mutation
