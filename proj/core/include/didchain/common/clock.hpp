#pragma once

#include <atomic>
#include <chrono>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace didchain {

// UTC instant with millisecond resolution.
struct Timestamp {
  std::int64_t unix_ms = 0;

  auto operator<=>(const Timestamp&) const = default;

  // Fixed-width "YYYY-MM-DDTHH:MM:SS.mmmZ", so lexicographic order of the
  // text matches chronological order.
  std::string iso8601() const;
  // Throws Error(MalformedRecord) on anything iso8601() would not produce.
  static Timestamp parse(std::string_view text);
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() override;
};

// Deterministic clock for tests and reproducible runs: returns start, then
// advances by step on every call.
class SteppingClock final : public Clock {
 public:
  explicit SteppingClock(Timestamp start,
                         std::chrono::milliseconds step = std::chrono::seconds(1))
      : next_(start.unix_ms), step_(step.count()) {}

  Timestamp now() override { return Timestamp{next_.fetch_add(step_)}; }

 private:
  std::atomic<std::int64_t> next_;
  std::int64_t step_;
};

std::shared_ptr<Clock> make_system_clock();

}  // namespace didchain
