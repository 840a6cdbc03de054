#include "evoforge/store/program_store.hpp"
#include "evoforge/store/resp.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace evoforge::store {

RespConnection::RespConnection(std::string host, int port, int timeout_ms)
    : host_(std::move(host)), port_(port), timeout_ms_(timeout_ms)
{
}

RespConnection::~RespConnection()
{
    close();
}

void RespConnection::close()
{
    if (fd_ >= 0)
        ::close(fd_);
    fd_ = -1;
    buffer_.clear();
}

void RespConnection::connect()
{
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    auto port = std::to_string(port_);
    if (int rc = ::getaddrinfo(host_.c_str(), port.c_str(), &hints, &res); rc != 0)
        throw BackendUnavailable("cannot resolve " + host_ + ": " + gai_strerror(rc));
    int fd = -1;
    for (auto* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd < 0)
            continue;
        timeval tv{timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000};
        ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
        ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
            break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0)
        throw BackendUnavailable("cannot connect to " + host_ + ":" + port);
    fd_ = fd;
}

RespValue RespConnection::command(const std::vector<std::string>& args)
{
    if (fd_ < 0)
        connect();
    auto frame = resp_encode(args);
    std::size_t sent = 0;
    while (sent < frame.size()) {
        auto n = ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) {
            close();
            throw BackendUnavailable(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
    char chunk[4096];
    while (true) {
        if (auto decoded = resp_decode(buffer_)) {
            buffer_.erase(0, decoded->second);
            return std::move(decoded->first);
        }
        auto n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n <= 0) {
            close();
            throw BackendUnavailable("connection lost while reading reply");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

RedisKv::RedisKv(const std::string& address, int timeout_ms)
{
    auto colon = address.rfind(':');
    if (colon == std::string::npos)
        throw BackendUnavailable("store address must be host:port, got '" + address + "'");
    conn_ = std::make_unique<RespConnection>(address.substr(0, colon), std::stoi(address.substr(colon + 1)),
                                             timeout_ms);
}

RespValue RedisKv::call(const std::vector<std::string>& args)
{
    auto reply = conn_->command(args);
    if (reply.kind == RespValue::Kind::Error)
        throw BackendUnavailable(args.front() + ": " + reply.text);
    return reply;
}

std::optional<std::string> RedisKv::get(const std::string& key)
{
    std::lock_guard lock(mutex_);
    auto r = call({"GET", key});
    if (r.is_nil())
        return std::nullopt;
    return r.text;
}

void RedisKv::set(const std::string& key, const std::string& value)
{
    std::lock_guard lock(mutex_);
    call({"SET", key, value});
}

bool RedisKv::compare_and_swap(const std::string& key, const std::optional<std::string>& expected,
                               const std::string& value)
{
    std::lock_guard lock(mutex_);
    call({"WATCH", key});
    auto current = call({"GET", key});
    bool matches = expected ? (!current.is_nil() && current.text == *expected) : current.is_nil();
    if (!matches) {
        call({"UNWATCH"});
        return false;
    }
    call({"MULTI"});
    call({"SET", key, value});
    auto exec = call({"EXEC"});
    return !exec.is_nil();
}

void RedisKv::list_push(const std::string& key, const std::string& value)
{
    std::lock_guard lock(mutex_);
    call({"RPUSH", key, value});
}

std::vector<std::string> RedisKv::list_range(const std::string& key)
{
    std::lock_guard lock(mutex_);
    auto r = call({"LRANGE", key, "0", "-1"});
    std::vector<std::string> out;
    for (auto& e : r.elements)
        out.push_back(std::move(e.text));
    return out;
}

std::int64_t RedisKv::increment(const std::string& key)
{
    std::lock_guard lock(mutex_);
    return call({"INCR", key}).integer;
}

void RedisKv::sorted_add(const std::string& key, double score, const std::string& member)
{
    std::lock_guard lock(mutex_);
    call({"ZADD", key, std::to_string(static_cast<std::int64_t>(score)), member});
}

std::vector<std::pair<std::string, double>> RedisKv::sorted_range_after(const std::string& key,
                                                                       double min_exclusive)
{
    std::lock_guard lock(mutex_);
    auto r = call({"ZRANGEBYSCORE", key, "(" + std::to_string(static_cast<std::int64_t>(min_exclusive)), "+inf",
                   "WITHSCORES"});
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i + 1 < r.elements.size(); i += 2)
        out.emplace_back(r.elements[i].text, std::stod(r.elements[i + 1].text));
    return out;
}

} // namespace evoforge::store
