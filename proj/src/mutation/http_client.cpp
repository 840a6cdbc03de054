#include "evoforge/mutation/llm_client.hpp"

#include <httplib.h>

#include <cstdlib>

namespace evoforge::mutation {

using json = nlohmann::json;

HttpClient::HttpClient(ModelRoute route, HttpOptions options) : route_(std::move(route)), options_(std::move(options))
{
    route_.validate();
    const std::string& url = route_.endpoint;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint '" + url + "' needs an http:// or https:// scheme");
    auto path_start = url.find('/', scheme_end + 3);
    base_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? std::string() : url.substr(path_start);
    while (!path_.empty() && path_.back() == '/')
        path_.pop_back();
    static const std::string suffix = "/chat/completions";
    if (path_.size() < suffix.size() || path_.compare(path_.size() - suffix.size(), suffix.size(), suffix) != 0)
        path_ += suffix;
}

json HttpClient::request_body(std::string_view prompt) const
{
    return json{{"model", route_.model_id},
                {"messages", json::array({json{{"role", "user"}, {"content", std::string(prompt)}}})},
                {"temperature", route_.temperature},
                {"max_tokens", route_.max_tokens}};
}

std::string HttpClient::extract_content(const json& response)
{
    const json* content = nullptr;
    if (response.is_object() && response.contains("choices") && response["choices"].is_array() &&
        !response["choices"].empty()) {
        const auto& first = response["choices"][0];
        if (first.is_object() && first.contains("message") && first["message"].is_object() &&
            first["message"].contains("content"))
            content = &first["message"]["content"];
    }
    if (!content || !content->is_string())
        throw LlmUnavailable("response has no choices[0].message.content");
    return content->get<std::string>();
}

std::string HttpClient::complete(std::string_view prompt)
{
    httplib::Client client(base_);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(options_.connect_timeout).count(),
                                  0);
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(options_.read_timeout).count(), 0);
    httplib::Headers headers;
    if (const char* token = std::getenv(options_.api_key_env.c_str()); token && *token)
        headers.emplace("Authorization", std::string("Bearer ") + token);

    auto res = client.Post(path_, headers, request_body(prompt).dump(), "application/json");
    if (!res)
        throw TransportError("POST " + base_ + path_ + ": " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw TransportError("POST " + base_ + path_ + ": HTTP " + std::to_string(res->status));
    if (res->status != 200)
        throw LlmUnavailable("POST " + base_ + path_ + ": HTTP " + std::to_string(res->status) + ": " +
                             res->body.substr(0, 200));
    json body;
    try {
        body = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw LlmUnavailable(std::string("malformed completion response: ") + e.what());
    }
    return extract_content(body);
}

} // namespace evoforge::mutation
