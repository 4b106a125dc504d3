#include "didchain/common/error.hpp"
#include "didchain/store/linkage.hpp"
#include "didchain/store/object_store.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>

namespace didchain::store {
namespace {

using identity::Did;

EventRecord sample_record() {
  EventRecord r;
  r.type = EventType::Ship;
  r.asset = Did::parse("did:chain:milk");
  r.actor = Did::parse("did:chain:farm");
  r.counterparty = Did::parse("did:chain:carrier");
  r.attributes = {{"batch", "7"}, {"temp", "4C"}};
  r.timestamp = Timestamp::parse("2024-03-05T10:00:00.000Z");
  return r;
}

TEST(EventRecord, JsonRoundTrip) {
  auto r = sample_record();
  EXPECT_EQ(EventRecord::from_json(r.to_json()), r);
  r.issuer_signature = IssuerSignature{Did::parse("did:chain:x"), Bytes(64, 3)};
  EXPECT_EQ(EventRecord::from_json(parse_json(r.canonical_bytes())), r);
  EXPECT_NE(r.signing_bytes(), r.canonical_bytes());
}

TEST(EventRecord, ValidatesTypeInvariants) {
  auto r = sample_record();
  r.counterparty.reset();
  EXPECT_THROW(r.validate(), Error);
  auto m = sample_record();
  m.type = EventType::Manufacture;
  m.counterparty.reset();
  EXPECT_THROW(m.validate(), Error);
  m.compartments = {Did::parse("did:chain:a")};
  EXPECT_NO_THROW(m.validate());
  m.compartment_versions = {"ab", "cd"};
  EXPECT_THROW(m.validate(), Error);
  m.compartment_versions = {"ab"};
  EXPECT_NO_THROW(m.validate());
}

TEST(ObjectStore, PutIsContentAddressed) {
  auto store = ObjectStore::in_memory();
  auto r = sample_record();
  auto cid = store.put(r);
  EXPECT_EQ(cid, Cid::of(r.canonical_bytes()));
  EXPECT_EQ(store.put(r), cid);
  EXPECT_EQ(store.get(cid), r);
  EXPECT_EQ(store.backend().list().size(), 1u);
  EXPECT_THROW(store.get(Cid::of("absent")), Error);
}

TEST(ObjectStore, DetectsCorruption) {
  auto backend = std::make_unique<MemoryBackend>();
  auto* raw = backend.get();
  ObjectStore store(std::move(backend));
  auto cid = store.put(sample_record());
  auto bytes = store.get_bytes(cid);
  bytes[5] ^= 0x01;
  raw->overwrite(cid, bytes);
  try {
    store.get(cid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IntegrityViolation);
  }
  auto scan = store.scan();
  EXPECT_EQ(scan.objects, 1u);
  EXPECT_EQ(scan.corrupt, std::vector<Cid>{cid});
}

TEST(ObjectStore, DirectoryBackendPersists) {
  testing::TempDir dir;
  Cid cid;
  {
    auto store = ObjectStore::in_directory(dir.path());
    cid = store.put(sample_record());
  }
  auto store = ObjectStore::in_directory(dir.path());
  EXPECT_EQ(store.get(cid), sample_record());
  EXPECT_TRUE(store.scan().ok());
  {
    std::ofstream out(dir.path() / cid.text(), std::ios::app);
    out << " ";
  }
  EXPECT_FALSE(store.scan().ok());
}

class LinkageTest : public ::testing::Test {
 protected:
  LinkageTest()
      : clock_(std::make_shared<SteppingClock>(Timestamp{0})),
        ledger_({}, clock_),
        registry_(ledger_, {}, clock_),
        farm_("farm", identity::SecretMode::InternalSecret),
        other_("other", identity::SecretMode::InternalSecret) {
    ledger_.open_account("farm", 1000);
    farm_.add_key("key-1", identity::KeyPair::from_seed(Bytes(32, 1)));
    other_.add_key("key-1", identity::KeyPair::from_seed(Bytes(32, 2)));
    farm_did_ = registry_.onboard(Did::parse("did:chain:farm"), farm_).id;
    other_did_ = registry_.onboard(Did::parse("did:chain:other"), other_).id;
  }

  identity::DidDocument link(const EventRecord& record) {
    auto cid = store_.put(record);
    asset_ = registry_.create_did(farm_, {{"event-1", identity::ServiceType::EventMetadata,
                                           cid.text()}},
                                  "farm", {.did = std::nullopt, .controller = farm_did_});
    cid_ = cid;
    return asset_;
  }

  std::shared_ptr<Clock> clock_;
  ledger::Ledger ledger_;
  identity::Registry registry_;
  ObjectStore store_;
  identity::Wallet farm_;
  identity::Wallet other_;
  Did farm_did_;
  Did other_did_;
  identity::DidDocument asset_;
  Cid cid_;
};

TEST_F(LinkageTest, ControllerIssuedRecordTrustedByLink) {
  auto r = sample_record();
  r.actor = farm_did_;
  auto doc = link(r);
  auto report = verify_linkage(cid_, doc, registry_, store_);
  EXPECT_EQ(report.verdict, LinkageVerdict::TrustedByLinkage);
  EXPECT_TRUE(report.linked);
  EXPECT_FALSE(report.signature_required);
}

TEST_F(LinkageTest, ForeignIssuerNeedsSignature) {
  auto r = sample_record();
  r.actor = other_did_;
  auto unsigned_doc = link(r);
  auto report = verify_linkage(cid_, unsigned_doc, registry_, store_);
  EXPECT_EQ(report.verdict, LinkageVerdict::Untrusted);
  EXPECT_TRUE(report.signature_required);

  auto sig = other_.sign(as_bytes(r.signing_bytes()));
  r.issuer_signature = IssuerSignature{other_did_, Bytes(sig.begin(), sig.end())};
  auto signed_doc = link(r);
  EXPECT_EQ(verify_linkage(cid_, signed_doc, registry_, store_).verdict,
            LinkageVerdict::TrustedBySignature);
}

TEST_F(LinkageTest, UnlinkedRecordUntrusted) {
  auto r = sample_record();
  r.actor = farm_did_;
  auto doc = link(r);
  auto other = sample_record();
  other.attributes["batch"] = "8";
  auto stray = store_.put(other);
  auto report = verify_linkage(stray, doc, registry_, store_);
  EXPECT_FALSE(report.linked);
  EXPECT_EQ(report.verdict, LinkageVerdict::Untrusted);
}

}  // namespace
}  // namespace didchain::store
