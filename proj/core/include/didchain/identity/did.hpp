#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace didchain::identity {

// did:<method>:<unique_id>. The method is lowercase alphanumeric; the unique
// id is non-empty and limited to URL-safe characters [A-Za-z0-9._-].
class Did {
 public:
  Did() = default;
  // Throws Error(MalformedDid).
  Did(std::string method, std::string unique_id);

  // Throws Error(MalformedDid).
  static Did parse(std::string_view text);
  static bool is_valid(std::string_view text) noexcept;

  const std::string& method() const noexcept { return method_; }
  const std::string& unique_id() const noexcept { return unique_id_; }
  std::string text() const { return "did:" + method_ + ":" + unique_id_; }
  bool empty() const noexcept { return unique_id_.empty(); }

  auto operator<=>(const Did&) const = default;

 private:
  std::string method_;
  std::string unique_id_;
};

}  // namespace didchain::identity
