#pragma once

#include "didchain/common/canonical_json.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <vector>

namespace didchain {

// Append-only NDJSON file. Each append is flushed before returning; load()
// returns every complete line in write order.
class Journal {
 public:
  explicit Journal(std::filesystem::path path);

  void append(const Json& entry);
  std::vector<Json> load() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::ofstream out_;
};

}  // namespace didchain
