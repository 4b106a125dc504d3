#pragma once

#include "didchain/common/clock.hpp"
#include "didchain/common/journal.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace didchain::ledger {

// Whole tokens (CT). The registry never charges fractions.
using TokenAmount = std::uint64_t;
using AccountId = std::string;

enum class TxKind { Create, Update, Deactivate };

std::string_view to_string(TxKind kind) noexcept;
TxKind tx_kind_from_string(std::string_view text);

struct FeeSchedule {
  TokenAmount create_fee = 50;
  TokenAmount update_fee = 25;
  // No published value; charged like an update.
  TokenAmount deactivate_fee = 25;

  TokenAmount fee_for(TxKind kind) const noexcept;
};

struct LedgerConfig {
  std::size_t block_size_limit = 200 * 1024;
  // USD per CT, 5 March 2024 snapshot.
  double token_price_usd = 0.117;
  FeeSchedule fees;

  // Throws Error(ConfigInvalid).
  void validate() const;
};

struct LedgerTransaction {
  std::string tx_id;
  TxKind kind = TxKind::Create;
  AccountId payer;
  std::size_t payload_size = 0;
  TokenAmount fee_charged = 0;
  std::uint64_t sequence = 0;
  Timestamp timestamp;

  bool operator==(const LedgerTransaction&) const = default;
};

Json to_json(const LedgerTransaction& tx);

struct TxTally {
  std::uint64_t creates = 0;
  std::uint64_t updates = 0;
  std::uint64_t deactivates = 0;

  TxTally operator-(const TxTally& o) const noexcept {
    return {creates - o.creates, updates - o.updates, deactivates - o.deactivates};
  }
  bool operator==(const TxTally&) const = default;
};

// Transactions committed by the calling thread so far, across all ledgers.
// Lets a caller attribute commits to one operation while other threads are
// committing concurrently.
TxTally thread_tx_tally() noexcept;
LedgerTransaction transaction_from_json(const Json& j);

// Fixed-fee, size-gated verifiable data registry ledger. Commits are
// serialized; reads take a shared lock and only ever observe committed state.
//
// With a data directory, accounts and transactions are journaled and replayed
// on construction, so a restarted ledger reports identical balances.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {},
                  std::shared_ptr<Clock> clock = make_system_clock(),
                  std::optional<std::filesystem::path> data_dir = std::nullopt);

  // Pre-funded account fixture. Re-opening an existing account with the same
  // initial balance is a no-op; a different balance is ConfigInvalid.
  void open_account(const AccountId& account, TokenAmount initial_balance);
  bool has_account(const AccountId& account) const;
  std::vector<AccountId> accounts() const;
  TokenAmount initial_balance_of(const AccountId& account) const;

  // Throws UnknownAccount, PayloadTooLarge or InsufficientBalance without
  // touching any state; otherwise commits and returns the transaction.
  LedgerTransaction submit(TxKind kind, const AccountId& payer, std::size_t payload_size);

  // The same gate as submit() without committing. Used by callers that must
  // validate a multi-transaction operation before its first write.
  void check_affordable(const AccountId& payer, TokenAmount total_fee) const;

  TokenAmount balance_of(const AccountId& account) const;
  std::vector<LedgerTransaction> tx_history(const AccountId& account) const;
  std::vector<LedgerTransaction> all_transactions() const;

  const LedgerConfig& config() const noexcept { return config_; }

 private:
  struct Account {
    TokenAmount initial_balance = 0;
    TokenAmount balance = 0;
    std::vector<std::size_t> tx_indices;
  };

  const Account& account_or_throw(const AccountId& account) const;
  void apply(LedgerTransaction tx);

  LedgerConfig config_;
  std::shared_ptr<Clock> clock_;
  std::unique_ptr<Journal> account_journal_;
  std::unique_ptr<Journal> tx_journal_;

  mutable std::shared_mutex mutex_;
  std::map<AccountId, Account> accounts_;
  std::vector<LedgerTransaction> transactions_;
  std::uint64_t next_sequence_ = 1;
};

}  // namespace didchain::ledger
