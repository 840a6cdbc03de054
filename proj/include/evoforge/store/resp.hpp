#pragma once

#include "evoforge/store/kv_client.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evoforge::store {

/// One RESP2 reply.
struct RespValue {
    enum class Kind { Simple, Error, Integer, Bulk, Nil, Array };
    Kind kind = Kind::Nil;
    std::string text;
    std::int64_t integer = 0;
    std::vector<RespValue> elements;

    bool is_nil() const { return kind == Kind::Nil; }
};

/// Encodes a command as an array of bulk strings.
std::string resp_encode(const std::vector<std::string>& args);

/// Decodes one reply from the front of `buffer`. Returns the value and the
/// number of bytes consumed, or nullopt when the buffer holds an incomplete
/// reply. Throws BackendUnavailable on a malformed reply.
std::optional<std::pair<RespValue, std::size_t>> resp_decode(std::string_view buffer);

/// Blocking TCP connection speaking RESP.
class RespConnection {
public:
    RespConnection(std::string host, int port, int timeout_ms = 5000);
    ~RespConnection();
    RespConnection(const RespConnection&) = delete;
    RespConnection& operator=(const RespConnection&) = delete;

    RespValue command(const std::vector<std::string>& args);

private:
    void connect();
    void close();

    std::string host_;
    int port_;
    int timeout_ms_;
    int fd_ = -1;
    std::string buffer_;
};

/// KvClient for a Redis-compatible server. CAS uses WATCH/GET/MULTI/SET/EXEC;
/// calls are serialized over a single connection.
class RedisKv final : public KvClient {
public:
    /// `address` is "host:port".
    explicit RedisKv(const std::string& address, int timeout_ms = 5000);

    std::optional<std::string> get(const std::string& key) override;
    void set(const std::string& key, const std::string& value) override;
    bool compare_and_swap(const std::string& key, const std::optional<std::string>& expected,
                          const std::string& value) override;
    void list_push(const std::string& key, const std::string& value) override;
    std::vector<std::string> list_range(const std::string& key) override;
    std::int64_t increment(const std::string& key) override;
    void sorted_add(const std::string& key, double score, const std::string& member) override;
    std::vector<std::pair<std::string, double>> sorted_range_after(const std::string& key,
                                                                  double min_exclusive) override;

private:
    RespValue call(const std::vector<std::string>& args);

    std::mutex mutex_;
    std::unique_ptr<RespConnection> conn_;
};

} // namespace evoforge::store
