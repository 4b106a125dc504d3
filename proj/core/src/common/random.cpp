#include "didchain/common/random.hpp"

namespace didchain {

Bytes RandomSource::bytes(std::size_t n) {
  std::lock_guard lock(mutex_);
  Bytes out(n);
  for (std::size_t i = 0; i < n; i += 8) {
    auto word = engine_();
    for (std::size_t j = 0; j < 8 && i + j < n; ++j) {
      out[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
  }
  return out;
}

std::uint64_t RandomSource::next_u64() {
  std::lock_guard lock(mutex_);
  return engine_();
}

}  // namespace didchain
