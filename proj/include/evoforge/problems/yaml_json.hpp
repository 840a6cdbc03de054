#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string_view>

namespace YAML {
class Node;
}

namespace evoforge {

/// Converts a YAML tree to JSON. Plain scalars become booleans, integers,
/// reals or null where they parse as such; quoted scalars stay strings.
nlohmann::json yaml_to_json(const YAML::Node& node);

/// Parses YAML text. Throws ConfigError with `origin` in the message.
nlohmann::json parse_yaml(std::string_view text, std::string_view origin);

/// Reads and parses a YAML file. Throws ConfigError naming the file.
nlohmann::json load_yaml_file(const std::filesystem::path& path);

} // namespace evoforge
