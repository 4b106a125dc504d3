#include "didchain/common/canonical_json.hpp"

#include "didchain/common/error.hpp"

namespace didchain {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace didchain
