#pragma once

#include "didchain/common/error.hpp"
#include "didchain/events/supply_chain.hpp"
#include "didchain/trace/time_model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace didchain::bench {

struct BenchRow {
  std::string scenario_id;
  std::string event_type;
  std::size_t x = 0;
  std::uint64_t doc_ops_create = 0;
  std::uint64_t doc_ops_update = 0;
  std::uint64_t trace_resolutions = 0;
  double elapsed_ms = 0.0;

  bool operator==(const BenchRow&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "scenario_id,event_type,x,doc_ops_create,doc_ops_update,trace_resolutions,elapsed_ms";

// Header plus one LF-terminated line per row.
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::string to_csv(const std::vector<BenchRow>& rows);

struct BenchOptions {
  std::uint64_t seed = 1;
  // Worker threads issuing engine calls; 1 is sequential. Op counts are
  // identical either way.
  unsigned threads = 1;
  events::CommitMode commit_mode = events::CommitMode::ServiceList;
  std::optional<std::size_t> compat_limit;
};

// Produce, ship, receive and manufacture batches of assets_per_event assets
// each; one row per (event type, asset). x is the number of assets the event
// touches.
std::vector<BenchRow> bench_events(std::size_t assets_per_event = 30,
                                   std::size_t compartments_for_manufacture = 2,
                                   const BenchOptions& options = {});

struct SweepResult {
  std::vector<BenchRow> rows;  // successful manufactures, ascending n
  std::size_t last_success = 0;
  // Error that ended the sweep before max_n, with the n that hit it.
  std::optional<ErrorCode> stop_error;
  std::optional<std::size_t> stop_n;
};

// Manufactures one product from n received compartments for each n in
// [min_n, max_n], stopping at the first rejected n.
SweepResult bench_manufacture_sweep(std::size_t max_n, std::size_t min_n = 1,
                                    const BenchOptions& options = {});

struct TraceSweep {
  std::vector<BenchRow> rows;
  trace::TraceModelFit resolutions_fit;
  trace::TraceModelFit time_fit;  // seconds
};

// Random supply chains traced at num_assets roots. Roots are assets still
// in circulation (neither consumed nor deactivated), so each root's latest
// version links its latest event.
TraceSweep bench_trace_sweep(std::size_t num_assets, const BenchOptions& options = {});

}  // namespace didchain::bench
