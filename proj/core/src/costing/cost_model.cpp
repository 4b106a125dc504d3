#include "didchain/costing/cost_model.hpp"

#include "didchain/common/error.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace didchain::costing {
namespace {

CostReport finish(CostReport r, const FeeSchedule& fees, double price) {
  r.total_ct = r.creates * fees.create_fee + r.updates * fees.update_fee +
               r.deactivates * fees.deactivate_fee;
  r.total_usd = to_usd(r.total_ct, price);
  return r;
}

}  // namespace

std::string Usd::text() const {
  auto whole = std::to_string(cents / 100);
  std::string grouped;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (i > 0 && (whole.size() - i) % 3 == 0) grouped += ',';
    grouped += whole[i];
  }
  char frac[4];
  std::snprintf(frac, sizeof frac, "%02lld", static_cast<long long>(cents % 100));
  return "$" + grouped + "." + frac;
}

Usd to_usd(TokenAmount ct, double price_usd_per_ct) {
  if (!(price_usd_per_ct >= 0.0) || !std::isfinite(price_usd_per_ct)) {
    throw Error(ErrorCode::ConfigInvalid, "token price must be a finite non-negative number");
  }
  auto micro = static_cast<std::uint64_t>(std::llround(price_usd_per_ct * 1e6));
  // ct * micro-dollars = 1e-6 USD units; one cent is 10^4 of them.
  auto units = static_cast<unsigned __int128>(ct) * micro;
  return Usd{static_cast<std::int64_t>((units + 5000) / 10000)};
}

Json CostReport::to_json() const {
  return Json{{"stakeholder", stakeholder},
              {"role", std::string(events::to_string(role))},
              {"creates", creates},
              {"updates", updates},
              {"deactivates", deactivates},
              {"totalCt", total_ct},
              {"totalUsd", total_usd.text()},
              {"totalUsdCents", total_usd.cents}};
}

CostReport stakeholder_cost(Role role, std::size_t n, const FeeSchedule& fees,
                            double price_usd_per_ct) {
  CostReport r;
  r.role = role;
  r.stakeholder = std::string(events::to_string(role));
  switch (role) {
    case Role::Producer: r.creates = 1; r.updates = 1; break;
    case Role::Supplier: r.updates = 2; break;
    case Role::Manufacturer: r.creates = 1; r.updates = 1 + n; break;
    case Role::Retailer: r.updates = 2; break;
    case Role::Customer: r.updates = 1; break;
    default: throw Error(ErrorCode::UnknownRole, "unknown role");
  }
  return finish(r, fees, price_usd_per_ct);
}

ManufactureCost manufacture_total_cost(std::size_t n, const FeeSchedule& fees,
                                       double price_usd_per_ct) {
  TokenAmount ct = fees.create_fee + (1 + static_cast<TokenAmount>(n)) * fees.update_fee;
  return {ct, to_usd(ct, price_usd_per_ct)};
}

std::vector<CostReport> scenario_cost(const events::ScenarioScript& script,
                                      const FeeSchedule& fees, double price_usd_per_ct) {
  script.validate();
  std::map<std::string, CostReport> by_actor;
  for (const auto& a : script.actors) {
    auto& r = by_actor[a.alias];
    r.stakeholder = a.alias;
    r.role = a.role;
  }
  for (const auto& e : script.events) {
    auto& r = by_actor.at(e.actor);
    switch (e.verb) {
      case events::Verb::Produce:
        ++r.creates;
        break;
      case events::Verb::Manufacture:
        ++r.creates;
        if (!e.lean) {
          r.updates += std::set<std::string>(e.compartments.begin(), e.compartments.end()).size();
        }
        break;
      case events::Verb::Ship:
      case events::Verb::Receive:
        ++r.updates;
        break;
      case events::Verb::Withdraw:
        ++r.updates;
        if (e.deactivate) ++r.deactivates;
        break;
    }
  }
  std::vector<CostReport> out;
  for (const auto& a : script.actors) {
    out.push_back(finish(by_actor.at(a.alias), fees, price_usd_per_ct));
  }
  return out;
}

std::vector<CostReport> ledger_cost_report(const events::SupplyChain& engine) {
  const auto& ledger = engine.ledger();
  std::vector<CostReport> out;
  for (const auto* actor : engine.actors()) {
    CostReport r;
    r.stakeholder = actor->alias;
    r.role = actor->role;
    for (const auto& tx : ledger.tx_history(actor->account)) {
      switch (tx.kind) {
        case ledger::TxKind::Create: ++r.creates; break;
        case ledger::TxKind::Update: ++r.updates; break;
        case ledger::TxKind::Deactivate: ++r.deactivates; break;
      }
      r.total_ct += tx.fee_charged;
    }
    r.total_usd = to_usd(r.total_ct, ledger.config().token_price_usd);
    out.push_back(r);
  }
  return out;
}

std::string format_cost_table(const std::vector<CostReport>& reports, double price_usd_per_ct) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %-13s %7s %7s %7s %10s %14s\n", "stakeholder", "role",
                "creates", "updates", "deact", "CT", "USD");
  out << line;
  TokenAmount ct = 0;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-18s %-13s %7zu %7zu %7zu %10llu %14s\n",
                  r.stakeholder.c_str(), std::string(events::to_string(r.role)).c_str(),
                  r.creates, r.updates, r.deactivates,
                  static_cast<unsigned long long>(r.total_ct), r.total_usd.text().c_str());
    out << line;
    ct += r.total_ct;
  }
  std::snprintf(line, sizeof line, "%-18s %-13s %7s %7s %7s %10llu %14s\n", "total", "", "", "",
                "", static_cast<unsigned long long>(ct), to_usd(ct, price_usd_per_ct).text().c_str());
  out << line;
  return out.str();
}

}  // namespace didchain::costing
