#pragma once

#include "didchain/events/scenario.hpp"
#include "didchain/ledger/ledger.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace didchain::costing {

using events::Role;
using ledger::FeeSchedule;
using ledger::TokenAmount;

// USD held as whole cents; conversions round half-up once.
struct Usd {
  std::int64_t cents = 0;

  double value() const noexcept { return static_cast<double>(cents) / 100.0; }
  // "$87,758.78"
  std::string text() const;
  auto operator<=>(const Usd&) const = default;
};

// round(ct * price, 2), half-up. The price is taken to micro-dollar
// precision so 0.117 is exact.
Usd to_usd(TokenAmount ct, double price_usd_per_ct);

struct CostReport {
  std::string stakeholder;  // role name, or actor alias for per-actor reports
  Role role = Role::Producer;
  std::size_t creates = 0;
  std::size_t updates = 0;
  std::size_t deactivates = 0;
  TokenAmount total_ct = 0;
  Usd total_usd;

  Json to_json() const;
  bool operator==(const CostReport&) const = default;
};

// Operation counts per stakeholder role: Producer 1C+1U, Supplier 2U,
// Manufacturer 1C+(1+n)U, Retailer 2U, Customer 1U.
CostReport stakeholder_cost(Role role, std::size_t n, const FeeSchedule& fees = {},
                            double price_usd_per_ct = 0.117);

struct ManufactureCost {
  TokenAmount ct = 0;
  Usd usd;
};

// create_fee + (1 + n) * update_fee.
ManufactureCost manufacture_total_cost(std::size_t n, const FeeSchedule& fees = {},
                                       double price_usd_per_ct = 0.117);

// Fees each actor of the script will be charged, predicted from the script
// alone (one report per declared actor, in declaration order). Throws
// Error(MalformedScript).
std::vector<CostReport> scenario_cost(const events::ScenarioScript& script,
                                      const FeeSchedule& fees = {},
                                      double price_usd_per_ct = 0.117);

// What the ledger actually charged each registered actor.
std::vector<CostReport> ledger_cost_report(const events::SupplyChain& engine);

std::string format_cost_table(const std::vector<CostReport>& reports,
                              double price_usd_per_ct = 0.117);

}  // namespace didchain::costing
