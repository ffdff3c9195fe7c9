#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace qdis::tools {

using Json = nlohmann::ordered_json;

/// Pretty-printed JSON with every floating-point value written to 17
/// significant digits. Non-finite values become null.
std::string to_json_text(const Json& j);

}  // namespace qdis::tools
