#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cosoliton {

/// Names of the fixtures compiled into the tool.
std::vector<std::string> builtin_names();

/// The fixture as a spec document, or nullopt for an unknown name.
std::optional<nlohmann::json> builtin_spec(const std::string& name);

} // namespace cosoliton
