#include "didchain/identity/did.hpp"

#include "didchain/common/error.hpp"

#include <algorithm>

namespace didchain::identity {
namespace {

bool valid_method(std::string_view m) {
  return !m.empty() && std::all_of(m.begin(), m.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  });
}

bool valid_unique_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

}  // namespace

Did::Did(std::string method, std::string unique_id)
    : method_(std::move(method)), unique_id_(std::move(unique_id)) {
  if (!valid_method(method_) || !valid_unique_id(unique_id_)) {
    throw Error(ErrorCode::MalformedDid, "malformed did: did:" + method_ + ":" + unique_id_);
  }
}

Did Did::parse(std::string_view text) {
  constexpr std::string_view scheme = "did:";
  if (text.substr(0, scheme.size()) != scheme) {
    throw Error(ErrorCode::MalformedDid, "malformed did: " + std::string(text));
  }
  auto rest = text.substr(scheme.size());
  auto colon = rest.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::MalformedDid, "malformed did: " + std::string(text));
  }
  return Did(std::string(rest.substr(0, colon)), std::string(rest.substr(colon + 1)));
}

bool Did::is_valid(std::string_view text) noexcept {
  try {
    parse(text);
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace didchain::identity
