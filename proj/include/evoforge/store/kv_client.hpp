#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evoforge::store {

/// Minimal key-value contract the external backend needs: strings with
/// compare-and-swap, append-only lists, counters and a sorted index.
/// Implementations throw BackendUnavailable on transport failure.
class KvClient {
public:
    virtual ~KvClient() = default;

    virtual std::optional<std::string> get(const std::string& key) = 0;
    virtual void set(const std::string& key, const std::string& value) = 0;

    /// Writes `value` iff the current value equals `expected` (nullopt meaning
    /// "key absent"). Returns false when the comparison failed.
    virtual bool compare_and_swap(const std::string& key, const std::optional<std::string>& expected,
                                  const std::string& value) = 0;

    virtual void list_push(const std::string& key, const std::string& value) = 0;
    virtual std::vector<std::string> list_range(const std::string& key) = 0;

    virtual std::int64_t increment(const std::string& key) = 0;

    virtual void sorted_add(const std::string& key, double score, const std::string& member) = 0;

    /// Members with score strictly greater than `min_exclusive`, ascending.
    virtual std::vector<std::pair<std::string, double>> sorted_range_after(const std::string& key,
                                                                          double min_exclusive) = 0;
};

/// In-process KvClient; the test double for the Redis-style backend.
class MemoryKv final : public KvClient {
public:
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

    /// Every key currently present, for namespace-layout assertions.
    std::vector<std::string> keys() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::string> strings_;
    std::map<std::string, std::vector<std::string>> lists_;
    std::map<std::string, std::map<std::string, double>> sorted_;
};

} // namespace evoforge::store
