#pragma once

#include <string>

#include <json.hpp>

namespace castbridge {

/// Deterministic JSON text: object keys sorted, floats with exactly six
/// decimals, two-space indent, trailing newline.
std::string canonical_json(const nlohmann::json& value);

}  // namespace castbridge
