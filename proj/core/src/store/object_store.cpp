#include "didchain/store/object_store.hpp"

#include "didchain/common/error.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <iterator>
#include <mutex>
#include <sstream>

namespace didchain::store {

Cid cid_of(ByteSpan bytes) { return Cid::of(bytes); }

bool MemoryBackend::contains(const Cid& cid) const {
  std::shared_lock lock(mutex_);
  return objects_.count(cid) != 0;
}

std::optional<std::string> MemoryBackend::read(const Cid& cid) const {
  std::shared_lock lock(mutex_);
  auto it = objects_.find(cid);
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

void MemoryBackend::write(const Cid& cid, const std::string& bytes) {
  std::unique_lock lock(mutex_);
  objects_.try_emplace(cid, bytes);
}

std::vector<Cid> MemoryBackend::list() const {
  std::shared_lock lock(mutex_);
  std::vector<Cid> out;
  for (const auto& [cid, _] : objects_) out.push_back(cid);
  return out;
}

void MemoryBackend::overwrite(const Cid& cid, std::string bytes) {
  std::unique_lock lock(mutex_);
  objects_[cid] = std::move(bytes);
}

DirectoryBackend::DirectoryBackend(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

bool DirectoryBackend::contains(const Cid& cid) const {
  return std::filesystem::exists(path_of(cid));
}

std::optional<std::string> DirectoryBackend::read(const Cid& cid) const {
  std::ifstream in(path_of(cid), std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void DirectoryBackend::write(const Cid& cid, const std::string& bytes) {
  auto target = path_of(cid);
  if (std::filesystem::exists(target)) return;
  std::ostringstream suffix;
  suffix << ".tmp-" << std::hash<std::thread::id>{}(std::this_thread::get_id());
  auto tmp = target;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::ConfigInvalid, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::vector<Cid> DirectoryBackend::list() const {
  std::vector<Cid> out;
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    auto name = entry.path().filename().string();
    if (entry.is_regular_file() && Cid::is_valid_text(name)) out.push_back(Cid::parse(name));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ObjectStore::ObjectStore(std::unique_ptr<BlobBackend> backend) : backend_(std::move(backend)) {}

ObjectStore ObjectStore::in_directory(const std::filesystem::path& root) {
  return ObjectStore(std::make_unique<DirectoryBackend>(root));
}

Cid ObjectStore::put(const EventRecord& record) {
  record.validate();
  auto bytes = record.canonical_bytes();
  auto cid = Cid::of(bytes);
  if (!backend_->contains(cid)) backend_->write(cid, bytes);
  return cid;
}

std::string ObjectStore::get_bytes(const Cid& cid) const {
  auto bytes = backend_->read(cid);
  if (!bytes) throw Error(ErrorCode::NotFound, "no stored object " + cid.text());
  if (Cid::of(*bytes) != cid) {
    throw Error(ErrorCode::IntegrityViolation, "stored bytes do not hash to " + cid.text());
  }
  return *bytes;
}

EventRecord ObjectStore::get(const Cid& cid) const {
  return EventRecord::from_json(parse_json(get_bytes(cid)));
}

ScanResult ObjectStore::scan() const {
  ScanResult result;
  for (const auto& cid : backend_->list()) {
    ++result.objects;
    auto bytes = backend_->read(cid);
    if (!bytes || Cid::of(*bytes) != cid) result.corrupt.push_back(cid);
  }
  return result;
}

}  // namespace didchain::store
