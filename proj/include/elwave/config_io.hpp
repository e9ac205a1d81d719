#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "elwave/model.hpp"

namespace elwave {

/// Parses a SimConfig. Unknown keys, wrong types and malformed JSON raise
/// ConfigError; parse errors carry the line and column.
SimConfig parse_config(const nlohmann::json& doc);
SimConfig parse_config_text(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

/// Full echo of every field, defaults included; parse_config(to_json(c))
/// reproduces c.
nlohmann::json to_json(const SimConfig& config);

DampingCase parse_case(const std::string& name);

/// Reads a whole file or throws ConfigError naming the path.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace elwave
