#include "didchain/bench/harness.hpp"

#include <gtest/gtest.h>

#include <map>

namespace didchain::bench {
namespace {

TEST(BenchEvents, RowsAndOpCounts) {
  auto rows = bench_events(30, 2);
  ASSERT_EQ(rows.size(), 120u);
  std::map<std::string, std::size_t> per_type;
  for (const auto& r : rows) {
    ++per_type[r.event_type];
    if (r.event_type == "produce") {
      EXPECT_EQ(r.doc_ops_create, 1u);
      EXPECT_EQ(r.doc_ops_update, 0u);
    } else if (r.event_type == "manufacture") {
      EXPECT_EQ(r.doc_ops_create, 1u);
      EXPECT_EQ(r.doc_ops_update, 2u);
    } else {
      EXPECT_EQ(r.doc_ops_create, 0u) << r.event_type;
      EXPECT_EQ(r.doc_ops_update, 1u) << r.event_type;
    }
    EXPECT_GE(r.elapsed_ms, 0.0);
  }
  for (const auto& [type, n] : per_type) EXPECT_EQ(n, 30u) << type;
}

std::vector<BenchRow> without_time(std::vector<BenchRow> rows) {
  for (auto& r : rows) r.elapsed_ms = 0;
  return rows;
}

TEST(BenchEvents, DeterministicAndThreadIndependent) {
  BenchOptions options;
  options.seed = 2;
  auto a = without_time(bench_events(8, 3, options));
  EXPECT_EQ(a, without_time(bench_events(8, 3, options)));
  options.threads = 4;
  auto parallel = without_time(bench_events(8, 3, options));
  ASSERT_EQ(parallel.size(), a.size());
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> seq, par;
  for (const auto& r : a) {
    seq[r.event_type].first += r.doc_ops_create;
    seq[r.event_type].second += r.doc_ops_update;
  }
  for (const auto& r : parallel) {
    par[r.event_type].first += r.doc_ops_create;
    par[r.event_type].second += r.doc_ops_update;
  }
  EXPECT_EQ(seq, par);
}

TEST(BenchSweep, StopsAtCompatLimit) {
  auto sweep = bench_manufacture_sweep(45, 36, {.compat_limit = 39});
  EXPECT_EQ(sweep.last_success, 39u);
  EXPECT_EQ(sweep.stop_error, ErrorCode::CompartmentLimitExceeded);
  EXPECT_EQ(sweep.stop_n, 40u);
  ASSERT_EQ(sweep.rows.size(), 4u);
  for (const auto& r : sweep.rows) EXPECT_EQ(r.doc_ops_update, r.x);
}

TEST(BenchSweep, RunsToMaxWithoutLimit) {
  auto sweep = bench_manufacture_sweep(5);
  EXPECT_EQ(sweep.last_success, 5u);
  EXPECT_FALSE(sweep.stop_error.has_value());
  EXPECT_EQ(sweep.rows.size(), 5u);
}

TEST(BenchTrace, ResolutionsExactlyAffine) {
  auto sweep = bench_trace_sweep(25);
  ASSERT_EQ(sweep.rows.size(), 25u);
  for (const auto& r : sweep.rows) EXPECT_EQ(r.trace_resolutions, 2 * r.x);
  EXPECT_NEAR(sweep.resolutions_fit.model.a, 2.0, 1e-9);
  EXPECT_NEAR(sweep.resolutions_fit.model.b, 0.0, 1e-9);
  EXPECT_NEAR(sweep.resolutions_fit.r_squared, 1.0, 1e-12);
}

TEST(BenchCsv, Format) {
  BenchRow r{"s1", "produce", 1, 1, 0, 0, 1.23456};
  EXPECT_EQ(to_csv({r}), std::string(kCsvHeader) + "\ns1,produce,1,1,0,0,1.235\n");
}

}  // namespace
}  // namespace didchain::bench
