#include "didchain/common/canonical_json.hpp"
#include "didchain/common/sha256.hpp"
#include "didchain/events/merkle.hpp"
#include "didchain/events/scenario.hpp"
#include "didchain/trace/tracer.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace didchain;

events::EngineConfig bench_config() {
  events::EngineConfig config;
  config.seed = 1;
  config.clock_start = Timestamp::parse("2024-03-05T00:00:00.000Z");
  return config;
}

void BM_Sha256(benchmark::State& state) {
  std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(sha256(std::string_view(data)));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(64)->Arg(1024)->Arg(64 * 1024);

void BM_CanonicalDocument(benchmark::State& state) {
  Json doc{{"id", "did:chain:Ab3dEf6hJk9mNp2rSt5vWx"}, {"service", Json::array()}};
  for (int i = 0; i < state.range(0); ++i) {
    doc["service"].push_back({{"id", "did:chain:Ab3dEf6hJk9mNp2rSt5vWx#compartment-" + std::to_string(i)},
                              {"type", "Compartment"},
                              {"serviceEndpoint", "did:chain:Zy8xWv7uTs6rQp5oNm4lKj"}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(canonical(doc));
}
BENCHMARK(BM_CanonicalDocument)->Arg(2)->Arg(100)->Arg(795);

void BM_MerkleRoot(benchmark::State& state) {
  std::vector<identity::Did> dids;
  for (int i = 0; i < state.range(0); ++i) dids.emplace_back("chain", "c" + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(events::build_compartment_merkle(dids).root);
}
BENCHMARK(BM_MerkleRoot)->Arg(2)->Arg(64)->Arg(1024);

void BM_ShipReceive(benchmark::State& state) {
  events::SupplyChain engine(bench_config());
  const auto& a = engine.register_actor("a", events::Role::Producer, events::seed_from_label("a"),
                                        1'000'000'000'000);
  const auto& b = engine.register_actor("b", events::Role::Supplier, events::seed_from_label("b"),
                                        1'000'000'000'000);
  auto asset = engine.produce(a).did;
  const auto* from = &a;
  const auto* to = &b;
  for (auto _ : state) {
    engine.ship(*from, asset, *to);
    engine.receive(*to, asset);
    std::swap(from, to);
  }
}
BENCHMARK(BM_ShipReceive)->Iterations(500);

void BM_TraceRandomChain(benchmark::State& state) {
  events::SupplyChain engine(bench_config());
  auto run = events::run_scenario(
      engine, events::random_scenario(3, {.events = static_cast<std::size_t>(state.range(0)),
                                          .allow_deactivate = false}));
  std::vector<identity::Did> roots;
  for (const auto& a : engine.assets()) {
    if (a.status != events::AssetStatus::Consumed) roots.push_back(a.did);
  }
  std::size_t i = 0, events_traced = 0;
  for (auto _ : state) {
    auto report = trace::trace(engine, roots[i++ % roots.size()]);
    events_traced += report.total_events();
  }
  state.counters["events_per_trace"] =
      benchmark::Counter(static_cast<double>(events_traced) / static_cast<double>(state.iterations()));
}
BENCHMARK(BM_TraceRandomChain)->Arg(50)->Arg(400);

}  // namespace
BENCHMARK_MAIN();
