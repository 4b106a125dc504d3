#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace didchain {

// Every failure surfaced by the library carries one of these codes. The
// gateway maps them onto HTTP statuses and the CLI prints error_name() on
// stderr, so the spelling of each name is part of the external contract.
enum class ErrorCode {
  InsufficientBalance,
  PayloadTooLarge,
  UnknownAccount,
  BadSeedLength,
  EmptyWallet,
  Unauthorized,
  Deactivated,
  NotFound,
  MalformedDid,
  UnknownVersion,
  IntegrityViolation,
  MalformedRecord,
  NotController,
  WrongRole,
  WrongState,
  CompartmentLimitExceeded,
  EmptyInput,
  DegenerateInput,
  UnknownRole,
  MalformedScript,
  InvalidToken,
  ServerSideSigningRefused,
  BadRequest,
  ConfigInvalid,
  BindFailure,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace didchain
