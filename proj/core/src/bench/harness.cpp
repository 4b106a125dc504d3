#include "didchain/bench/harness.hpp"

#include "didchain/common/error.hpp"
#include "didchain/events/scenario.hpp"
#include "didchain/trace/tracer.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

namespace didchain::bench {
namespace {

using events::Did;
using Steady = std::chrono::steady_clock;

constexpr ledger::TokenAmount kBenchBalance = 1'000'000'000'000ULL;

events::EngineConfig engine_config(const BenchOptions& options) {
  events::EngineConfig config;
  config.seed = options.seed;
  config.clock_start = Timestamp::parse("2024-03-05T00:00:00.000Z");
  config.max_compartments_per_tx = options.compat_limit;
  return config;
}

template <typename Fn>
BenchRow measure(std::string scenario, std::string event, std::size_t x, Fn&& fn) {
  auto before = ledger::thread_tx_tally();
  auto start = Steady::now();
  fn();
  auto elapsed = std::chrono::duration<double, std::milli>(Steady::now() - start).count();
  auto ops = ledger::thread_tx_tally() - before;
  return BenchRow{std::move(scenario), std::move(event), x, ops.creates, ops.updates, 0, elapsed};
}

// Runs body(i) for i in [0, n) on the requested number of threads.
template <typename Fn>
void for_each_index(std::size_t n, unsigned threads, Fn&& body) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kCsvHeader << '\n';
  char elapsed[32];
  for (const auto& r : rows) {
    std::snprintf(elapsed, sizeof elapsed, "%.3f", r.elapsed_ms);
    out << r.scenario_id << ',' << r.event_type << ',' << r.x << ',' << r.doc_ops_create << ','
        << r.doc_ops_update << ',' << r.trace_resolutions << ',' << elapsed << '\n';
  }
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

std::vector<BenchRow> bench_events(std::size_t assets_per_event,
                                   std::size_t compartments_for_manufacture,
                                   const BenchOptions& options) {
  if (assets_per_event == 0 || compartments_for_manufacture == 0) {
    throw Error(ErrorCode::BadRequest, "bench_events needs at least one asset and compartment");
  }
  events::SupplyChain engine(engine_config(options));
  const auto& producer = engine.register_actor("producer", events::Role::Producer,
                                               events::seed_from_label("bench-producer"),
                                               kBenchBalance);
  const auto& maker = engine.register_actor("manufacturer", events::Role::Manufacturer,
                                            events::seed_from_label("bench-manufacturer"),
                                            kBenchBalance);
  const std::string id = "events-" + std::to_string(options.seed);
  const auto n = assets_per_event;
  const auto extra = n * (compartments_for_manufacture - 1);
  std::vector<BenchRow> rows(4 * n);
  std::vector<Did> raw(n + extra);

  // Rows cover the first n assets; the extra compartments the manufacture
  // batch needs are provisioned alongside without rows.
  for_each_index(n, options.threads, [&](std::size_t i) {
    rows[i] = measure(id, "produce", 1, [&] { raw[i] = engine.produce(producer).did; });
  });
  for_each_index(extra, options.threads, [&](std::size_t i) {
    raw[n + i] = engine.produce(producer).did;
  });
  for_each_index(n, options.threads, [&](std::size_t i) {
    rows[n + i] = measure(id, "ship", 1, [&] { engine.ship(producer, raw[i], maker); });
  });
  for_each_index(extra, options.threads, [&](std::size_t i) {
    engine.ship(producer, raw[n + i], maker);
  });
  for_each_index(n, options.threads, [&](std::size_t i) {
    rows[2 * n + i] = measure(id, "receive", 1, [&] { engine.receive(maker, raw[i]); });
  });
  for_each_index(extra, options.threads, [&](std::size_t i) { engine.receive(maker, raw[n + i]); });
  for_each_index(n, options.threads, [&](std::size_t i) {
    std::vector<Did> compartments{raw[i]};
    for (std::size_t k = 1; k < compartments_for_manufacture; ++k) {
      compartments.push_back(raw[n + i * (compartments_for_manufacture - 1) + (k - 1)]);
    }
    rows[3 * n + i] = measure(id, "manufacture", compartments.size(), [&] {
      engine.manufacture(maker, compartments, {}, events::ManufactureOptions{options.commit_mode});
    });
  });
  return rows;
}

SweepResult bench_manufacture_sweep(std::size_t max_n, std::size_t min_n,
                                    const BenchOptions& options) {
  if (max_n == 0 || min_n == 0 || min_n > max_n) {
    throw Error(ErrorCode::BadRequest, "sweep needs 1 <= min_n <= max_n");
  }
  events::SupplyChain engine(engine_config(options));
  const auto& producer = engine.register_actor("producer", events::Role::Producer,
                                               events::seed_from_label("bench-producer"),
                                               kBenchBalance);
  const auto& maker = engine.register_actor("manufacturer", events::Role::Manufacturer,
                                            events::seed_from_label("bench-manufacturer"),
                                            kBenchBalance);
  const std::string id = "manufacture-sweep-" + std::to_string(options.seed);
  SweepResult result;
  for (auto n = min_n; n <= max_n; ++n) {
    std::vector<Did> compartments(n);
    for_each_index(n, options.threads, [&](std::size_t k) {
      auto did = engine.produce(producer).did;
      engine.ship(producer, did, maker);
      engine.receive(maker, did);
      compartments[k] = did;
    });
    try {
      result.rows.push_back(measure(id, "manufacture", n, [&] {
        engine.manufacture(maker, compartments, {},
                           events::ManufactureOptions{options.commit_mode});
      }));
      result.last_success = n;
    } catch (const Error& e) {
      result.stop_error = e.code();
      result.stop_n = n;
      break;
    }
  }
  return result;
}

TraceSweep bench_trace_sweep(std::size_t num_assets, const BenchOptions& options) {
  if (num_assets < 2) throw Error(ErrorCode::BadRequest, "trace sweep needs at least two assets");
  events::RandomScenarioOptions gen;
  gen.allow_deactivate = false;
  gen.events = std::max<std::size_t>(4 * num_assets, 32);

  for (;;) {
    events::SupplyChain engine(engine_config(options));
    auto script = events::random_scenario(options.seed, gen);
    events::run_scenario(engine, script);
    std::vector<Did> roots;
    for (const auto& a : engine.assets()) {
      if (a.status != events::AssetStatus::Consumed && !a.deactivated) roots.push_back(a.did);
    }
    if (roots.size() < num_assets) {
      gen.events *= 2;
      continue;
    }
    roots.resize(num_assets);

    TraceSweep sweep;
    const std::string id = "trace-sweep-" + std::to_string(options.seed);
    sweep.rows.resize(num_assets);
    for_each_index(num_assets, options.threads, [&](std::size_t i) {
      auto start = Steady::now();
      auto report = trace::trace(engine, roots[i]);
      auto elapsed = std::chrono::duration<double, std::milli>(Steady::now() - start).count();
      sweep.rows[i] = BenchRow{id, "trace", report.total_events(), 0, 0,
                               report.resolution_count, elapsed};
    });
    std::vector<std::pair<double, double>> counts, times;
    for (const auto& r : sweep.rows) {
      counts.emplace_back(static_cast<double>(r.x), static_cast<double>(r.trace_resolutions));
      times.emplace_back(static_cast<double>(r.x), r.elapsed_ms / 1000.0);
    }
    sweep.resolutions_fit = trace::fit_trace_model(counts);
    sweep.time_fit = trace::fit_trace_model(times);
    return sweep;
  }
}

}  // namespace didchain::bench
