#include "evoforge/store/kv_client.hpp"

#include <algorithm>

namespace evoforge::store {

std::optional<std::string> MemoryKv::get(const std::string& key)
{
    std::lock_guard lock(mutex_);
    auto it = strings_.find(key);
    if (it == strings_.end())
        return std::nullopt;
    return it->second;
}

void MemoryKv::set(const std::string& key, const std::string& value)
{
    std::lock_guard lock(mutex_);
    strings_[key] = value;
}

bool MemoryKv::compare_and_swap(const std::string& key, const std::optional<std::string>& expected,
                                const std::string& value)
{
    std::lock_guard lock(mutex_);
    auto it = strings_.find(key);
    if (!expected) {
        if (it != strings_.end())
            return false;
        strings_.emplace(key, value);
        return true;
    }
    if (it == strings_.end() || it->second != *expected)
        return false;
    it->second = value;
    return true;
}

void MemoryKv::list_push(const std::string& key, const std::string& value)
{
    std::lock_guard lock(mutex_);
    lists_[key].push_back(value);
}

std::vector<std::string> MemoryKv::list_range(const std::string& key)
{
    std::lock_guard lock(mutex_);
    auto it = lists_.find(key);
    return it == lists_.end() ? std::vector<std::string>{} : it->second;
}

std::int64_t MemoryKv::increment(const std::string& key)
{
    std::lock_guard lock(mutex_);
    auto& slot = strings_[key];
    std::int64_t next = slot.empty() ? 1 : std::stoll(slot) + 1;
    slot = std::to_string(next);
    return next;
}

void MemoryKv::sorted_add(const std::string& key, double score, const std::string& member)
{
    std::lock_guard lock(mutex_);
    sorted_[key][member] = score;
}

std::vector<std::pair<std::string, double>> MemoryKv::sorted_range_after(const std::string& key,
                                                                        double min_exclusive)
{
    std::lock_guard lock(mutex_);
    std::vector<std::pair<std::string, double>> out;
    if (auto it = sorted_.find(key); it != sorted_.end()) {
        for (const auto& [member, score] : it->second) {
            if (score > min_exclusive)
                out.emplace_back(member, score);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    return out;
}

std::vector<std::string> MemoryKv::keys() const
{
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [k, _] : strings_)
        out.push_back(k);
    for (const auto& [k, _] : lists_)
        out.push_back(k);
    for (const auto& [k, _] : sorted_)
        out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace evoforge::store
