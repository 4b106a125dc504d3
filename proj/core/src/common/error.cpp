#include "didchain/common/error.hpp"

namespace didchain {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InsufficientBalance: return "InsufficientBalance";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::UnknownAccount: return "UnknownAccount";
    case ErrorCode::BadSeedLength: return "BadSeedLength";
    case ErrorCode::EmptyWallet: return "EmptyWallet";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::Deactivated: return "Deactivated";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::MalformedDid: return "MalformedDid";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::IntegrityViolation: return "IntegrityViolation";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NotController: return "NotController";
    case ErrorCode::WrongRole: return "WrongRole";
    case ErrorCode::WrongState: return "WrongState";
    case ErrorCode::CompartmentLimitExceeded: return "CompartmentLimitExceeded";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::UnknownRole: return "UnknownRole";
    case ErrorCode::MalformedScript: return "MalformedScript";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::ServerSideSigningRefused: return "ServerSideSigningRefused";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::BindFailure: return "BindFailure";
  }
  return "Unknown";
}

}  // namespace didchain
