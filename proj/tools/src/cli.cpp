#include "didchain_cli/cli.hpp"

#include "didchain/bench/harness.hpp"
#include "didchain/costing/cost_model.hpp"
#include "didchain/events/scenario.hpp"
#include "didchain/gateway/service.hpp"
#include "didchain/trace/tracer.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

namespace didchain::cli {
namespace {

using events::Did;

constexpr ledger::TokenAmount kFixtureBalance = 1'000'000'000ULL;

struct Globals {
  std::string data_dir;
  std::uint64_t seed = 0;
  std::string clock_start;
  std::optional<std::size_t> compat_limit;
  std::optional<double> price;
  std::optional<ledger::TokenAmount> create_fee;
  std::optional<ledger::TokenAmount> update_fee;
  bool circular_reuse = false;
  bool in_memory = false;
};

events::EngineConfig engine_config(const Globals& g) {
  events::EngineConfig c;
  c.seed = g.seed;
  if (!g.clock_start.empty()) c.clock_start = Timestamp::parse(g.clock_start);
  c.max_compartments_per_tx = g.compat_limit;
  c.circular_reuse = g.circular_reuse;
  if (g.price) c.ledger.token_price_usd = *g.price;
  if (g.create_fee) c.ledger.fees.create_fee = *g.create_fee;
  if (g.update_fee) c.ledger.fees.update_fee = *g.update_fee;
  if (!g.in_memory) c.data_dir = g.data_dir;
  return c;
}

events::Attributes parse_attributes(const std::vector<std::string>& pairs) {
  events::Attributes out;
  for (const auto& p : pairs) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--attr", "expected key=value, got '" + p + "'");
    }
    out[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return out;
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

const events::Actor& fixture_actor(events::SupplyChain& engine, const std::string& alias,
                                   events::Role role) {
  if (const auto* a = engine.find_actor(alias)) return *a;
  return engine.register_actor(alias, role, events::seed_from_label(alias), kFixtureBalance);
}

std::atomic<bool> stop_requested{false};

extern "C" void on_signal(int) { stop_requested = true; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"didchain: supply-chain provenance on DID documents"};
  app.name("didchain");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  if (const char* dir = std::getenv("DIDCHAIN_DATA_DIR"); dir && *dir) {
    g.data_dir = dir;
  } else {
    g.data_dir = "didchain-data";
  }
  app.add_option("--data-dir", g.data_dir, "State directory (env DIDCHAIN_DATA_DIR)");
  app.add_flag("--in-memory", g.in_memory, "Keep no state on disk");
  app.add_option("--seed", g.seed, "Seed for identifier generation");
  app.add_option("--clock-start", g.clock_start,
                 "Deterministic clock start, e.g. 2024-03-05T00:00:00.000Z");
  app.add_option("--compat-limit", g.compat_limit, "Maximum compartments per transaction");
  app.add_option("--price", g.price, "USD per CT");
  app.add_option("--create-fee", g.create_fee, "CT per DID creation");
  app.add_option("--update-fee", g.update_fee, "CT per DID update");
  app.add_flag("--circular-reuse", g.circular_reuse,
               "Allow withdrawn assets to be consumed as compartments");

  std::function<void(events::SupplyChain&)> action;
  auto engine_action = [&](auto fn) { action = fn; };

  // actor create
  auto* actor_cmd = app.add_subcommand("actor", "Manage supply-chain participants");
  actor_cmd->require_subcommand(1);
  auto* actor_create = actor_cmd->add_subcommand("create", "Register an actor");
  std::string alias, role_name, seed_hex, mode_name = "internal";
  ledger::TokenAmount balance = 1000;
  actor_create->add_option("--alias", alias, "Actor alias (also its account id)")->required();
  actor_create->add_option("--role", role_name,
                           "Producer, Supplier, Manufacturer, Retailer or Customer")
      ->required();
  actor_create->add_option("--key-seed", seed_hex, "32-byte Ed25519 seed as hex");
  actor_create->add_option("--balance", balance, "Initial CT balance");
  actor_create->add_option("--mode", mode_name, "internal or client-managed");
  actor_create->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto seed = seed_hex.empty() ? events::seed_from_label(alias) : from_hex(seed_hex);
      const auto& a = engine.register_actor(alias, events::role_from_string(role_name), seed,
                                            balance, identity::secret_mode_from_string(mode_name));
      print_json(out, {{"alias", a.alias},
                       {"did", a.did.text()},
                       {"role", std::string(events::to_string(a.role))},
                       {"balance", engine.ledger().balance_of(a.account)}});
    });
  });

  // events
  std::string actor_alias, asset_text, recipient, reason, mode_text = "ServiceList";
  std::vector<std::string> attrs, compartment_dids;
  std::optional<std::size_t> auto_compartments;
  bool lean = false, deactivate = false;

  auto* produce = app.add_subcommand("produce", "Document the production of a raw material");
  produce->add_option("--actor", actor_alias, "Producer alias")->required();
  produce->add_option("--attr", attrs, "Record attribute key=value (repeatable)");
  produce->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto r = engine.produce(engine.actor(actor_alias), parse_attributes(attrs));
      print_json(out, {{"did", r.did.text()}, {"cid", r.cid.text()}});
    });
  });

  auto* ship = app.add_subcommand("ship", "Ship an asset and hand over control");
  ship->add_option("--actor", actor_alias, "Current controller alias")->required();
  ship->add_option("--asset", asset_text, "Asset DID")->required();
  ship->add_option("--to", recipient, "Recipient alias")->required();
  ship->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto cid = engine.ship(engine.actor(actor_alias), Did::parse(asset_text),
                             engine.actor(recipient));
      print_json(out, {{"did", asset_text}, {"cid", cid.text()}});
    });
  });

  auto* receive = app.add_subcommand("receive", "Confirm receipt of a shipped asset");
  receive->add_option("--actor", actor_alias, "Recipient alias")->required();
  receive->add_option("--asset", asset_text, "Asset DID")->required();
  receive->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto cid = engine.receive(engine.actor(actor_alias), Did::parse(asset_text));
      print_json(out, {{"did", asset_text}, {"cid", cid.text()}});
    });
  });

  auto* manufacture = app.add_subcommand("manufacture", "Make a product from compartments");
  manufacture->add_option("--actor", actor_alias,
                          "Manufacturer alias (a fixture manufacturer when omitted)");
  auto* comp_list = manufacture->add_option("--compartment", compartment_dids,
                                            "Compartment DID (repeatable, order kept)");
  auto* comp_count = manufacture->add_option(
      "--compartments", auto_compartments,
      "Provision this many fresh received compartments and use them");
  comp_list->excludes(comp_count);
  manufacture->add_option("--mode", mode_text, "ServiceList or MerkleRoot");
  manufacture->add_flag("--lean", lean, "Log receivables only in the Manufacture record");
  manufacture->add_option("--attr", attrs, "Record attribute key=value (repeatable)");
  manufacture->callback([&] {
    if (compartment_dids.empty() && !auto_compartments) {
      throw CLI::RequiredError("--compartment or --compartments");
    }
    engine_action([&](events::SupplyChain& engine) {
      const auto& maker = actor_alias.empty()
                              ? fixture_actor(engine, "cli-manufacturer", events::Role::Manufacturer)
                              : engine.actor(actor_alias);
      std::vector<Did> compartments;
      for (const auto& d : compartment_dids) compartments.push_back(Did::parse(d));
      if (auto_compartments) {
        if (g.compat_limit && *auto_compartments > *g.compat_limit) {
          // Refuse before provisioning anything.
          throw Error(ErrorCode::CompartmentLimitExceeded,
                      std::to_string(*auto_compartments) + " compartments exceed the limit of " +
                          std::to_string(*g.compat_limit) + " per transaction");
        }
        const auto& producer = fixture_actor(engine, "cli-producer", events::Role::Producer);
        for (std::size_t i = 0; i < *auto_compartments; ++i) {
          auto did = engine.produce(producer).did;
          engine.ship(producer, did, maker);
          engine.receive(maker, did);
          compartments.push_back(did);
        }
      }
      auto r = engine.manufacture(
          maker, compartments, parse_attributes(attrs),
          events::ManufactureOptions{events::commit_mode_from_string(mode_text), lean});
      Json j{{"did", r.did.text()}, {"cid", r.cid.text()}, {"compartments", Json::array()}};
      for (const auto& c : compartments) j["compartments"].push_back(c.text());
      print_json(out, j);
    });
  });

  auto* withdraw = app.add_subcommand("withdraw", "Withdraw an asset from circulation");
  withdraw->add_option("--actor", actor_alias, "Current controller alias")->required();
  withdraw->add_option("--asset", asset_text, "Asset DID")->required();
  withdraw->add_option("--reason", reason, "Reason recorded in the Withdraw record");
  withdraw->add_flag("--deactivate", deactivate, "Also deactivate the asset DID");
  withdraw->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto cid = engine.withdraw(engine.actor(actor_alias), Did::parse(asset_text), reason,
                                 deactivate);
      print_json(out, {{"did", asset_text}, {"cid", cid.text()}});
    });
  });

  // reads
  std::string did_text, version_id, format = "json";
  auto* resolve = app.add_subcommand("resolve", "Resolve a DID document");
  resolve->add_option("did", did_text, "DID")->required();
  resolve->add_option("--version-id", version_id, "Resolve this historical version");
  resolve->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto did = Did::parse(did_text);
      auto doc = version_id.empty() ? engine.registry().resolve(did)
                                    : engine.registry().resolve_version(did, version_id);
      print_json(out, doc.resolution_json());
    });
  });

  auto* versions = app.add_subcommand("versions", "List the versions of a DID document");
  versions->add_option("did", did_text, "DID")->required();
  versions->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      Json j = Json::array();
      for (const auto& m : engine.registry().list_versions(Did::parse(did_text))) {
        j.push_back(identity::to_json(m));
      }
      print_json(out, j);
    });
  });

  auto* trace_cmd = app.add_subcommand("trace", "Full recursive provenance of an asset");
  trace_cmd->add_option("did", did_text, "Asset DID")->required();
  trace_cmd->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  trace_cmd->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto report = trace::trace(engine, Did::parse(did_text));
      if (format == "json") {
        print_json(out, report.to_json());
      } else {
        out << report.to_text();
      }
    });
  });

  auto* track_cmd = app.add_subcommand("track", "Current state of an asset");
  track_cmd->add_option("did", did_text, "Asset DID")->required();
  track_cmd->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  track_cmd->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto report = trace::track(engine, Did::parse(did_text));
      if (format == "json") {
        print_json(out, report.to_json());
      } else {
        out << report.did.text() << "  " << events::to_string(report.status) << "  controller "
            << report.controller.text() << '\n';
      }
    });
  });

  std::string script_path;
  bool stakeholders = false;
  std::size_t table_n = 0;
  auto* cost = app.add_subcommand("cost-report", "Fees per actor or per stakeholder role");
  cost->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cost->add_option("--script", script_path, "Predict the fees of a scenario script instead");
  cost->add_flag("--stakeholders", stakeholders, "Print the per-role cost table");
  cost->add_option("--n", table_n, "Compartments per product for the role table");
  cost->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      const auto& lc = engine.ledger().config();
      std::vector<costing::CostReport> reports;
      if (stakeholders) {
        for (auto role : {events::Role::Producer, events::Role::Supplier,
                          events::Role::Manufacturer, events::Role::Retailer,
                          events::Role::Customer}) {
          reports.push_back(costing::stakeholder_cost(role, table_n, lc.fees, lc.token_price_usd));
        }
      } else if (!script_path.empty()) {
        reports = costing::scenario_cost(events::ScenarioScript::load(script_path), lc.fees,
                                         lc.token_price_usd);
      } else {
        reports = costing::ledger_cost_report(engine);
      }
      if (format == "json") {
        Json j = Json::array();
        for (const auto& r : reports) j.push_back(r.to_json());
        print_json(out, j);
      } else {
        out << costing::format_cost_table(reports, lc.token_price_usd);
      }
    });
  });

  auto* verify = app.add_subcommand("verify-store",
                                    "Re-hash every stored record and every DID version chain");
  verify->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto scan = engine.store().scan();
      Json j{{"objects", scan.objects}, {"corrupt", Json::array()}, {"brokenChains", Json::array()}};
      for (const auto& c : scan.corrupt) j["corrupt"].push_back(c.text());
      std::size_t dids = 0;
      for (const auto& did : engine.registry().all_dids()) {
        ++dids;
        auto verdict = trace::verify_history_chain(engine.registry(), did);
        if (!verdict.ok) {
          j["brokenChains"].push_back({{"did", did.text()},
                                       {"version", *verdict.failed_version},
                                       {"reason", verdict.reason}});
        }
      }
      j["dids"] = dids;
      print_json(out, j);
      if (!scan.ok() || !j["brokenChains"].empty()) {
        throw Error(ErrorCode::IntegrityViolation, "store verification failed");
      }
    });
  });

  auto* run_scenario = app.add_subcommand("run-scenario", "Execute a scenario script");
  run_scenario->add_option("script", script_path, "Scenario JSON")->required();
  run_scenario->callback([&] {
    engine_action([&](events::SupplyChain& engine) {
      auto script = events::ScenarioScript::load(script_path);
      auto run = events::run_scenario(engine, script);
      Json j{{"assets", Json::object()}, {"events", Json::array()}};
      for (const auto& [a, did] : run.assets) j["assets"][a] = did.text();
      for (const auto& e : run.log) {
        j["events"].push_back({{"index", e.index},
                               {"actor", e.actor},
                               {"verb", std::string(events::to_string(e.verb))},
                               {"asset", e.asset_alias},
                               {"did", e.asset.text()},
                               {"cid", e.cid.text()}});
      }
      print_json(out, j);
    });
  });

  // bench
  std::string bench_out;
  bench::BenchOptions bench_options;
  std::size_t assets = 30, per_product = 2, max_n = 39, min_n = 1, num_assets = 383;
  auto* bench_cmd = app.add_subcommand("bench", "Reproducible benchmark runs, CSV output");
  bench_cmd->require_subcommand(1);
  bench_cmd->add_option("--out", bench_out, "Directory for CSV files (stdout when omitted)");
  bench_cmd->add_option("--threads", bench_options.threads, "Concurrent engine callers");
  auto emit = [&](const std::string& name, const std::vector<bench::BenchRow>& rows) {
    if (bench_out.empty()) {
      bench::write_csv(out, rows);
      return;
    }
    std::filesystem::create_directories(bench_out);
    auto path = std::filesystem::path(bench_out) / (name + ".csv");
    std::ofstream file(path, std::ios::binary);
    bench::write_csv(file, rows);
    err << "wrote " << path.string() << '\n';
  };
  auto* bench_events = bench_cmd->add_subcommand("events", "Per-event documentation cost");
  bench_events->add_option("--assets", assets, "Assets per event type");
  bench_events->add_option("--compartments", per_product, "Compartments per manufactured product");
  bench_events->callback([&] {
    bench_options.seed = g.seed;
    emit("events", bench::bench_events(assets, per_product, bench_options));
  });
  auto* bench_sweep = bench_cmd->add_subcommand("manufacture-sweep",
                                                "Products with a growing number of compartments");
  bench_sweep->add_option("--max-n", max_n, "Largest compartment count");
  bench_sweep->add_option("--min-n", min_n, "Smallest compartment count");
  bench_sweep->add_option("--mode", mode_text, "ServiceList or MerkleRoot");
  bench_sweep->callback([&] {
    bench_options.seed = g.seed;
    bench_options.compat_limit = g.compat_limit;
    bench_options.commit_mode = events::commit_mode_from_string(mode_text);
    auto result = bench::bench_manufacture_sweep(max_n, min_n, bench_options);
    emit("manufacture_sweep", result.rows);
    err << "last successful n: " << result.last_success;
    if (result.stop_error) {
      err << "; n = " << *result.stop_n << " failed with " << error_name(*result.stop_error);
    }
    err << '\n';
  });
  auto* bench_trace = bench_cmd->add_subcommand("trace-sweep", "Trace assets of varying history");
  bench_trace->add_option("--num-assets", num_assets, "Assets to trace");
  bench_trace->callback([&] {
    bench_options.seed = g.seed;
    auto sweep = bench::bench_trace_sweep(num_assets, bench_options);
    emit("trace_sweep", sweep.rows);
    char line[200];
    std::snprintf(line, sizeof line,
                  "resolutions = %.6f * events + %.6f (R^2 = %.6f)\n"
                  "seconds     = %.9f * events + %.9f (R^2 = %.4f)\n",
                  sweep.resolutions_fit.model.a, sweep.resolutions_fit.model.b,
                  sweep.resolutions_fit.r_squared, sweep.time_fit.model.a,
                  sweep.time_fit.model.b, sweep.time_fit.r_squared);
    err << line;
  });

  std::string config_path;
  auto* serve = app.add_subcommand("serve", "Run the HTTP gateway until SIGINT or SIGTERM");
  serve->add_option("--config", config_path, "Gateway config JSON (env DIDCHAIN_CONFIG)");
  serve->callback([&] {
    if (config_path.empty()) {
      const char* env = std::getenv("DIDCHAIN_CONFIG");
      if (!env || !*env) throw CLI::RequiredError("--config");
      config_path = env;
    }
    auto config = gateway::GatewayConfig::load(config_path);
    gateway::Service service(config);
    gateway::Server server(service, config.host, config.port);
    server.start();
    err << "listening on " << config.host << ':' << server.port() << '\n';
    stop_requested = false;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    err << "stopped\n";
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (action) {
      events::SupplyChain engine(engine_config(g));
      action(engine);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace didchain::cli
