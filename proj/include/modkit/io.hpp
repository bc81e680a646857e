#pragma once

#include <json.hpp>
#include <string>

#include "modkit/set_function.hpp"

namespace modkit {

using Json = nlohmann::ordered_json;

/// {"n", "kind", "values"} for table, linear and symmetric functions.
Json function_to_json(const SetFunction& f);
SetFunction function_from_json(const Json& doc);

Json linear_to_json(const LinearFunction& g);

SetFunction load_function(const std::string& path);
void save_json(const std::string& path, const Json& doc);
Json load_json(const std::string& path);

}  // namespace modkit
