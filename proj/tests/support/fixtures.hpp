#pragma once

#include "didchain/events/scenario.hpp"
#include "didchain/events/supply_chain.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace didchain::testing {

inline events::EngineConfig fixed_config(std::uint64_t seed = 1) {
  events::EngineConfig config;
  config.seed = seed;
  config.clock_start = Timestamp::parse("2024-03-05T00:00:00.000Z");
  return config;
}

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(DIDCHAIN_SCENARIO_DIR) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("didchain-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// The cast of the dairy walkthrough, registered on an engine.
struct Cast {
  const events::Actor* farm;
  const events::Actor* yeast_lab;
  const events::Actor* carrier;
  const events::Actor* cheesery;
  const events::Actor* shop;
  const events::Actor* customer;

  explicit Cast(events::SupplyChain& engine, ledger::TokenAmount balance = 10'000) {
    using events::Role;
    auto reg = [&](const char* alias, Role role) {
      return &engine.register_actor(alias, role, events::seed_from_label(alias), balance);
    };
    farm = reg("farm", Role::Producer);
    yeast_lab = reg("yeast-lab", Role::Producer);
    carrier = reg("carrier", Role::Supplier);
    cheesery = reg("cheesery", Role::Manufacturer);
    shop = reg("shop", Role::Retailer);
    customer = reg("customer", Role::Customer);
  }
};

}  // namespace didchain::testing
