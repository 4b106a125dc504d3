#include "didchain/common/error.hpp"
#include "didchain/costing/cost_model.hpp"
#include "didchain/events/scenario.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace didchain::costing {
namespace {

TEST(Usd, HalfUpRounding) {
  EXPECT_EQ(to_usd(75, 0.117).cents, 878);   // 8.775
  EXPECT_EQ(to_usd(25, 0.117).cents, 293);   // 2.925
  EXPECT_EQ(to_usd(50, 0.117).cents, 585);
  EXPECT_EQ(to_usd(0, 0.117).cents, 0);
  EXPECT_EQ(to_usd(1, 0.004999).cents, 0);
  EXPECT_EQ(to_usd(1, 0.005).cents, 1);
  EXPECT_EQ(to_usd(750'075, 0.117).text(), "$87,758.78");
  EXPECT_EQ(Usd{5}.text(), "$0.05");
  EXPECT_EQ(Usd{123456789}.text(), "$1,234,567.89");
}

TEST(StakeholderCost, FixedRoles) {
  struct Row {
    Role role;
    TokenAmount ct;
    std::int64_t cents;
  };
  for (auto [role, ct, cents] : {Row{Role::Producer, 75, 878}, Row{Role::Supplier, 50, 585},
                                 Row{Role::Retailer, 50, 585}, Row{Role::Customer, 25, 293}}) {
    auto r = stakeholder_cost(role, 0);
    EXPECT_EQ(r.total_ct, ct) << to_string(role);
    EXPECT_EQ(r.total_usd.cents, cents) << to_string(role);
  }
  auto p = stakeholder_cost(Role::Producer, 0);
  EXPECT_EQ(p.creates, 1u);
  EXPECT_EQ(p.updates, 1u);
}

TEST(StakeholderCost, ManufacturerGrowsWithCompartments) {
  for (std::size_t n : {1u, 2u, 10u, 795u}) {
    auto r = stakeholder_cost(Role::Manufacturer, n);
    EXPECT_EQ(r.total_ct, 50 + (1 + n) * 25);
    EXPECT_EQ(r.updates, 1 + n);
    EXPECT_EQ(r.total_usd, to_usd(r.total_ct, 0.117));
  }
  TokenAmount prev = 0;
  for (std::size_t n = 0; n < 200; ++n) {
    auto ct = manufacture_total_cost(n).ct;
    EXPECT_GT(ct, prev);
    prev = ct;
  }
}

TEST(ManufactureTotal, ThirtyThousandCompartments) {
  auto c = manufacture_total_cost(30'000);
  EXPECT_EQ(c.ct, 750'075u);
  EXPECT_EQ(c.usd.cents, 8'775'878);
}

TEST(ManufactureTotal, CustomFees) {
  ledger::FeeSchedule fees{10, 2, 2};
  EXPECT_EQ(manufacture_total_cost(4, fees).ct, 20u);
}

TEST(ScenarioCost, DairyPrediction) {
  auto script = events::ScenarioScript::load(testing::scenario_path("dairy.json"));
  auto reports = scenario_cost(script);
  std::map<std::string, TokenAmount> expected{{"farm", 75},    {"yeast-lab", 75},
                                              {"carrier", 50}, {"cheesery", 175},
                                              {"shop", 50},    {"customer", 25}};
  ASSERT_EQ(reports.size(), expected.size());
  TokenAmount total = 0;
  for (const auto& r : reports) {
    EXPECT_EQ(r.total_ct, expected.at(r.stakeholder)) << r.stakeholder;
    total += r.total_ct;
  }
  EXPECT_EQ(total, 450u);
  EXPECT_EQ(to_usd(total, 0.117).text(), "$52.65");
}

TEST(ScenarioCost, MatchesLedgerCharges) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto script = events::random_scenario(seed, {.events = 60});
    events::SupplyChain engine(testing::fixed_config(seed));
    events::run_scenario(engine, script);
    auto predicted = scenario_cost(script);
    std::map<std::string, CostReport> charged;
    for (auto& r : ledger_cost_report(engine)) charged[r.stakeholder] = r;
    ASSERT_EQ(predicted.size(), charged.size());
    for (const auto& p : predicted) {
      const auto& c = charged.at(p.stakeholder);
      EXPECT_EQ(p.total_ct, c.total_ct) << seed << " " << p.stakeholder;
      EXPECT_EQ(p.creates, c.creates);
      EXPECT_EQ(p.updates, c.updates);
      EXPECT_EQ(p.deactivates, c.deactivates);
    }
  }
}

TEST(ScenarioCost, LeanManufacturerPaysCreateOnly) {
  auto script = events::ScenarioScript::load(testing::scenario_path("dairy.json"));
  for (auto& e : script.events) {
    if (e.verb == events::Verb::Manufacture) e.lean = true;
  }
  for (const auto& r : scenario_cost(script)) {
    if (r.stakeholder == "cheesery") {
      EXPECT_EQ(r.total_ct, 125u);
    }
  }
}

TEST(CostTable, ListsEveryRow) {
  auto table = format_cost_table({stakeholder_cost(Role::Producer, 0),
                                  stakeholder_cost(Role::Manufacturer, 2)});
  EXPECT_NE(table.find("Producer"), std::string::npos);
  EXPECT_NE(table.find("$8.78"), std::string::npos);
  EXPECT_NE(table.find("125"), std::string::npos);
  auto j = stakeholder_cost(Role::Customer, 0).to_json();
  EXPECT_EQ(j["totalCt"], 25);
}

}  // namespace
}  // namespace didchain::costing
