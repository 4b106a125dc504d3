#pragma once

#include "didchain/common/content_id.hpp"
#include "didchain/store/event_record.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace didchain::store {

// Where object bytes live. Implementations must tolerate concurrent writes of
// identical content.
class BlobBackend {
 public:
  virtual ~BlobBackend() = default;
  virtual bool contains(const Cid& cid) const = 0;
  virtual std::optional<std::string> read(const Cid& cid) const = 0;
  virtual void write(const Cid& cid, const std::string& bytes) = 0;
  virtual std::vector<Cid> list() const = 0;
};

class MemoryBackend final : public BlobBackend {
 public:
  bool contains(const Cid& cid) const override;
  std::optional<std::string> read(const Cid& cid) const override;
  void write(const Cid& cid, const std::string& bytes) override;
  std::vector<Cid> list() const override;

  // Fault injection: replaces stored bytes without changing the key.
  void overwrite(const Cid& cid, std::string bytes);

 private:
  mutable std::shared_mutex mutex_;
  std::map<Cid, std::string> objects_;
};

// One file per object, named by the Cid text. Writes go to a temporary file
// and are renamed into place.
class DirectoryBackend final : public BlobBackend {
 public:
  explicit DirectoryBackend(std::filesystem::path root);

  bool contains(const Cid& cid) const override;
  std::optional<std::string> read(const Cid& cid) const override;
  void write(const Cid& cid, const std::string& bytes) override;
  std::vector<Cid> list() const override;

  std::filesystem::path path_of(const Cid& cid) const { return root_ / cid.text(); }

 private:
  std::filesystem::path root_;
};

struct ScanResult {
  std::size_t objects = 0;
  std::vector<Cid> corrupt;

  bool ok() const noexcept { return corrupt.empty(); }
};

// Content-addressed, append-only store of event records.
class ObjectStore {
 public:
  explicit ObjectStore(std::unique_ptr<BlobBackend> backend = std::make_unique<MemoryBackend>());

  static ObjectStore in_memory() { return ObjectStore(); }
  static ObjectStore in_directory(const std::filesystem::path& root);

  // Validates the record, stores its canonical bytes and returns their Cid.
  // Storing the same record again returns the same Cid without a new write.
  Cid put(const EventRecord& record);
  // Throws NotFound, IntegrityViolation (bytes no longer hash to cid) or
  // MalformedRecord.
  EventRecord get(const Cid& cid) const;
  std::string get_bytes(const Cid& cid) const;
  bool contains(const Cid& cid) const { return backend_->contains(cid); }

  // Re-hashes every stored object.
  ScanResult scan() const;

  BlobBackend& backend() noexcept { return *backend_; }

 private:
  std::unique_ptr<BlobBackend> backend_;
};

Cid cid_of(ByteSpan bytes);

}  // namespace didchain::store
