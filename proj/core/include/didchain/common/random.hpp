#pragma once

#include "didchain/common/bytes.hpp"

#include <cstdint>
#include <mutex>
#include <random>

namespace didchain {

// Seedable byte source shared by everything that mints identifiers.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();

 private:
  std::mutex mutex_;
  std::mt19937_64 engine_;
};

}  // namespace didchain
