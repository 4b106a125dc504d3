#include "didchain/ledger/ledger.hpp"

#include "didchain/common/error.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>

namespace didchain::ledger {
namespace {
thread_local TxTally tally;
}  // namespace

std::string_view to_string(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::Create: return "Create";
    case TxKind::Update: return "Update";
    case TxKind::Deactivate: return "Deactivate";
  }
  return "Create";
}

TxKind tx_kind_from_string(std::string_view text) {
  if (text == "Create") return TxKind::Create;
  if (text == "Update") return TxKind::Update;
  if (text == "Deactivate") return TxKind::Deactivate;
  throw Error(ErrorCode::MalformedRecord, "unknown transaction kind: " + std::string(text));
}

TokenAmount FeeSchedule::fee_for(TxKind kind) const noexcept {
  switch (kind) {
    case TxKind::Create: return create_fee;
    case TxKind::Update: return update_fee;
    case TxKind::Deactivate: return deactivate_fee;
  }
  return create_fee;
}

void LedgerConfig::validate() const {
  if (block_size_limit == 0) {
    throw Error(ErrorCode::ConfigInvalid, "block_size_limit must be positive");
  }
  if (!(token_price_usd > 0.0) || !std::isfinite(token_price_usd)) {
    throw Error(ErrorCode::ConfigInvalid, "token_price_usd must be positive");
  }
}

Json to_json(const LedgerTransaction& tx) {
  return Json{{"txId", tx.tx_id},
              {"kind", to_string(tx.kind)},
              {"payer", tx.payer},
              {"payloadSize", tx.payload_size},
              {"feeCharged", tx.fee_charged},
              {"sequence", tx.sequence},
              {"timestamp", tx.timestamp.iso8601()}};
}

LedgerTransaction transaction_from_json(const Json& j) {
  try {
    LedgerTransaction tx;
    tx.tx_id = j.at("txId").get<std::string>();
    tx.kind = tx_kind_from_string(j.at("kind").get<std::string>());
    tx.payer = j.at("payer").get<std::string>();
    tx.payload_size = j.at("payloadSize").get<std::size_t>();
    tx.fee_charged = j.at("feeCharged").get<TokenAmount>();
    tx.sequence = j.at("sequence").get<std::uint64_t>();
    tx.timestamp = Timestamp::parse(j.at("timestamp").get<std::string>());
    return tx;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("bad transaction: ") + e.what());
  }
}

Ledger::Ledger(LedgerConfig config, std::shared_ptr<Clock> clock,
               std::optional<std::filesystem::path> data_dir)
    : config_(config), clock_(std::move(clock)) {
  config_.validate();
  if (!data_dir) return;

  account_journal_ = std::make_unique<Journal>(*data_dir / "accounts.ndjson");
  tx_journal_ = std::make_unique<Journal>(*data_dir / "ledger.ndjson");
  for (const auto& entry : account_journal_->load()) {
    auto id = entry.at("account").get<AccountId>();
    auto initial = entry.at("initialBalance").get<TokenAmount>();
    accounts_[id] = Account{initial, initial, {}};
  }
  for (const auto& entry : tx_journal_->load()) {
    apply(transaction_from_json(entry));
  }
}

void Ledger::open_account(const AccountId& account, TokenAmount initial_balance) {
  std::unique_lock lock(mutex_);
  if (auto it = accounts_.find(account); it != accounts_.end()) {
    if (it->second.initial_balance != initial_balance) {
      throw Error(ErrorCode::ConfigInvalid,
                  "account " + account + " already exists with another balance");
    }
    return;
  }
  accounts_[account] = Account{initial_balance, initial_balance, {}};
  if (account_journal_) {
    account_journal_->append(Json{{"account", account}, {"initialBalance", initial_balance}});
  }
}

bool Ledger::has_account(const AccountId& account) const {
  std::shared_lock lock(mutex_);
  return accounts_.count(account) != 0;
}

std::vector<AccountId> Ledger::accounts() const {
  std::shared_lock lock(mutex_);
  std::vector<AccountId> out;
  for (const auto& [id, _] : accounts_) out.push_back(id);
  return out;
}

TokenAmount Ledger::initial_balance_of(const AccountId& account) const {
  std::shared_lock lock(mutex_);
  return account_or_throw(account).initial_balance;
}

const Ledger::Account& Ledger::account_or_throw(const AccountId& account) const {
  auto it = accounts_.find(account);
  if (it == accounts_.end()) {
    throw Error(ErrorCode::UnknownAccount, "unknown account: " + account);
  }
  return it->second;
}

void Ledger::check_affordable(const AccountId& payer, TokenAmount total_fee) const {
  std::shared_lock lock(mutex_);
  const auto& acct = account_or_throw(payer);
  if (acct.balance < total_fee) {
    throw Error(ErrorCode::InsufficientBalance,
                payer + " holds " + std::to_string(acct.balance) + " CT, needs " +
                    std::to_string(total_fee) + " CT");
  }
}

LedgerTransaction Ledger::submit(TxKind kind, const AccountId& payer,
                                 std::size_t payload_size) {
  std::unique_lock lock(mutex_);
  const auto& acct = account_or_throw(payer);
  if (payload_size > config_.block_size_limit) {
    throw Error(ErrorCode::PayloadTooLarge,
                "payload of " + std::to_string(payload_size) + " bytes exceeds the " +
                    std::to_string(config_.block_size_limit) + "-byte block limit");
  }
  auto fee = config_.fees.fee_for(kind);
  if (acct.balance < fee) {
    throw Error(ErrorCode::InsufficientBalance,
                payer + " holds " + std::to_string(acct.balance) + " CT, needs " +
                    std::to_string(fee) + " CT");
  }

  LedgerTransaction tx;
  tx.sequence = next_sequence_;
  char id[32];
  std::snprintf(id, sizeof id, "tx-%010llu", static_cast<unsigned long long>(tx.sequence));
  tx.tx_id = id;
  tx.kind = kind;
  tx.payer = payer;
  tx.payload_size = payload_size;
  tx.fee_charged = fee;
  tx.timestamp = clock_->now();

  if (tx_journal_) tx_journal_->append(to_json(tx));
  switch (kind) {
    case TxKind::Create: ++tally.creates; break;
    case TxKind::Update: ++tally.updates; break;
    case TxKind::Deactivate: ++tally.deactivates; break;
  }
  apply(tx);
  return tx;
}

TxTally thread_tx_tally() noexcept { return tally; }

void Ledger::apply(LedgerTransaction tx) {
  auto& acct = accounts_.at(tx.payer);
  acct.balance -= tx.fee_charged;
  acct.tx_indices.push_back(transactions_.size());
  next_sequence_ = tx.sequence + 1;
  transactions_.push_back(std::move(tx));
}

TokenAmount Ledger::balance_of(const AccountId& account) const {
  std::shared_lock lock(mutex_);
  return account_or_throw(account).balance;
}

std::vector<LedgerTransaction> Ledger::tx_history(const AccountId& account) const {
  std::shared_lock lock(mutex_);
  const auto& acct = account_or_throw(account);
  std::vector<LedgerTransaction> out;
  out.reserve(acct.tx_indices.size());
  for (auto idx : acct.tx_indices) out.push_back(transactions_[idx]);
  return out;
}

std::vector<LedgerTransaction> Ledger::all_transactions() const {
  std::shared_lock lock(mutex_);
  return transactions_;
}

}  // namespace didchain::ledger
