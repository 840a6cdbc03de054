#include "evoforge/problems/yaml_json.hpp"

#include "evoforge/core/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace evoforge {

namespace {

using json = nlohmann::json;

json scalar_to_json(const YAML::Node& node)
{
    const std::string& s = node.Scalar();
    if (node.Tag() == "!")
        return s;
    if (s == "true" || s == "True" || s == "TRUE")
        return true;
    if (s == "false" || s == "False" || s == "FALSE")
        return false;
    if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL")
        return nullptr;
    {
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (end == s.c_str() + s.size() && errno == 0)
            return v;
    }
    {
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size() && errno == 0 && s.find_first_of("0123456789") != std::string::npos)
            return v;
    }
    return s;
}

} // namespace

json yaml_to_json(const YAML::Node& node)
{
    switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
        return nullptr;
    case YAML::NodeType::Scalar:
        return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
        json arr = json::array();
        for (const auto& item : node)
            arr.push_back(yaml_to_json(item));
        return arr;
    }
    case YAML::NodeType::Map: {
        json obj = json::object();
        for (const auto& kv : node)
            obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
        return obj;
    }
    }
    return nullptr;
}

json parse_yaml(std::string_view text, std::string_view origin)
{
    try {
        return yaml_to_json(YAML::Load(std::string(text)));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string(origin) + ": " + e.what());
    }
}

json load_yaml_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_yaml(ss.str(), path.string());
}

} // namespace evoforge
