#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace didchain {

using Json = nlohmann::json;

// Canonical form used for signatures, version ids, content ids and size
// accounting: UTF-8, object keys in byte-lexicographic order, no
// insignificant whitespace. nlohmann::json keeps objects in a std::map, so a
// compact dump() already has sorted keys.
inline std::string canonical(const Json& value) { return value.dump(); }

// Parses text produced by canonical(). Throws Error(MalformedRecord).
Json parse_json(std::string_view text);

}  // namespace didchain
