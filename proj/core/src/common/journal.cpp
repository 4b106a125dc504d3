#include "didchain/common/journal.hpp"

#include "didchain/common/error.hpp"

#include <iterator>

namespace didchain {

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  // Drop a torn last line left by an interrupted append.
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!content.empty() && content.back() != '\n') {
      auto keep = content.rfind('\n');
      in.close();
      std::filesystem::resize_file(path_, keep == std::string::npos ? 0 : keep + 1);
    }
  }
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) {
    throw Error(ErrorCode::ConfigInvalid, "cannot open journal " + path_.string());
  }
}

void Journal::append(const Json& entry) {
  std::lock_guard lock(mutex_);
  out_ << canonical(entry) << '\n';
  out_.flush();
}

std::vector<Json> Journal::load() const {
  std::vector<Json> entries;
  std::ifstream in(path_, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // A torn final line from an interrupted append is dropped.
    if (in.eof()) break;
    entries.push_back(parse_json(line));
  }
  return entries;
}

}  // namespace didchain
