#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"
#include "didchain/identity/registry.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace didchain::identity {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadRequest;
}

class RegistryTest : public ::testing::Test {
 protected:
  RegistryTest()
      : clock_(std::make_shared<SteppingClock>(Timestamp::parse("2024-03-05T00:00:00.000Z"))),
        ledger_({}, clock_),
        registry_(ledger_, {}, clock_, std::make_shared<RandomSource>(3)),
        alice_("alice", SecretMode::InternalSecret),
        bob_("bob", SecretMode::InternalSecret) {
    ledger_.open_account("alice", 1000);
    ledger_.open_account("bob", 1000);
    alice_.add_key("key-1", KeyPair::from_seed(Bytes(32, 0xa1)));
    bob_.add_key("key-1", KeyPair::from_seed(Bytes(32, 0xb0)));
  }

  DidDocument create(std::vector<ServiceEntry> services = {}) {
    return registry_.create_did(alice_, std::move(services), "alice");
  }

  DidDocument add_event(const Did& did, const Wallet& signer, const std::string& fragment) {
    DocumentDelta delta;
    delta.add_services = {{fragment, ServiceType::EventMetadata, Cid::of(fragment).text()}};
    auto sig = signer.sign(registry_.signing_payload(did, delta));
    return registry_.update_did(did, delta, sig, signer.owner());
  }

  std::shared_ptr<Clock> clock_;
  ledger::Ledger ledger_;
  Registry registry_;
  Wallet alice_;
  Wallet bob_;
};

TEST_F(RegistryTest, CreateChargesAndResolves) {
  auto doc = create();
  EXPECT_EQ(doc.id.method(), "chain");
  EXPECT_EQ(base58_decode(doc.id.unique_id()).size(), 16u);
  EXPECT_EQ(ledger_.balance_of("alice"), 950u);
  EXPECT_EQ(registry_.resolve(doc.id), doc);
  EXPECT_FALSE(doc.metadata.previous_version_id.has_value());
  EXPECT_EQ(doc.controllers, std::vector<Did>{doc.id});
  auto stored = registry_.stored_history(doc.id);
  ASSERT_EQ(stored.size(), 1u);
  // Independent recomputation of the version id.
  EXPECT_EQ(doc.metadata.version_id, to_hex(sha256(std::string_view(stored[0].bytes))));
}

TEST_F(RegistryTest, UpdateLinksVersions) {
  auto v1 = create();
  auto v2 = add_event(v1.id, alice_, "event-1");
  EXPECT_EQ(v2.metadata.previous_version_id, v1.metadata.version_id);
  EXPECT_EQ(v2.metadata.created, v1.metadata.created);
  EXPECT_GT(v2.metadata.updated, v1.metadata.updated);
  auto stored = registry_.stored_history(v1.id);
  EXPECT_EQ(v2.metadata.version_id, compute_version_id(stored[1].bytes, v1.metadata.version_id));
  EXPECT_EQ(ledger_.balance_of("alice"), 925u);
  EXPECT_EQ(registry_.resolve_version(v1.id, v1.metadata.version_id), v1);
  EXPECT_EQ(registry_.list_versions(v1.id).size(), 2u);
  EXPECT_EQ(code_of([&] { registry_.resolve_version(v1.id, "00"); }), ErrorCode::UnknownVersion);
}

TEST_F(RegistryTest, NonControllerIsUnauthorizedAndUncharged) {
  auto doc = create();
  EXPECT_EQ(code_of([&] { add_event(doc.id, bob_, "event-1"); }), ErrorCode::Unauthorized);
  EXPECT_EQ(ledger_.balance_of("bob"), 1000u);
  EXPECT_EQ(registry_.list_versions(doc.id).size(), 1u);
}

TEST_F(RegistryTest, SignatureCannotBeReplayed) {
  auto doc = create();
  DocumentDelta delta;
  delta.add_services = {{"event-1", ServiceType::EventMetadata, Cid::of("x").text()}};
  auto sig = alice_.sign(registry_.signing_payload(doc.id, delta));
  registry_.update_did(doc.id, delta, sig, "alice");
  DocumentDelta remove;
  remove.remove_services = {"event-1"};
  auto sig2 = alice_.sign(registry_.signing_payload(doc.id, remove));
  registry_.update_did(doc.id, remove, sig2, "alice");
  // Same delta and signature on the new head.
  EXPECT_EQ(code_of([&] { registry_.update_did(doc.id, delta, sig, "alice"); }),
            ErrorCode::Unauthorized);
}

TEST_F(RegistryTest, HandoverTransfersControl) {
  auto doc = create();
  auto bob_did = registry_.onboard(Did::parse("did:chain:bob"), bob_).id;
  std::vector<VerificationMethod> methods{{"key-1", bob_did, bob_.public_keys()[0].second}};
  auto delta = Registry::handover_delta(bob_did, methods);
  auto sig = alice_.sign(registry_.signing_payload(doc.id, delta));
  auto v2 = registry_.handover_controller(doc.id, bob_did, methods, sig, "alice");
  EXPECT_TRUE(v2.is_controller(bob_did));
  EXPECT_FALSE(v2.is_controller(doc.id));
  EXPECT_EQ(code_of([&] { add_event(doc.id, alice_, "event-1"); }), ErrorCode::Unauthorized);
  add_event(doc.id, bob_, "event-1");
}

TEST_F(RegistryTest, DeactivationIsFinal) {
  auto doc = create();
  auto sig = alice_.sign(registry_.deactivation_payload(doc.id));
  auto v2 = registry_.deactivate_did(doc.id, sig, "alice");
  EXPECT_TRUE(v2.metadata.deactivated);
  EXPECT_TRUE(registry_.resolve(doc.id).metadata.deactivated);
  EXPECT_EQ(code_of([&] { add_event(doc.id, alice_, "event-1"); }), ErrorCode::Deactivated);
  EXPECT_EQ(code_of([&] {
              registry_.deactivate_did(
                  doc.id, alice_.sign(registry_.deactivation_payload(doc.id)), "alice");
            }),
            ErrorCode::Deactivated);
}

TEST_F(RegistryTest, ResolveErrors) {
  EXPECT_EQ(code_of([&] { registry_.resolve("did:chain:missing"); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { registry_.resolve("not-a-did"); }), ErrorCode::MalformedDid);
  EXPECT_EQ(code_of([&] { registry_.list_dids("nobody"); }), ErrorCode::UnknownAccount);
}

TEST_F(RegistryTest, ListDidsByPayer) {
  auto a = create();
  auto b = create();
  registry_.create_did(bob_, {}, "bob");
  EXPECT_EQ(registry_.list_dids("alice"), (std::vector<Did>{a.id, b.id}));
  EXPECT_EQ(registry_.list_dids("bob").size(), 1u);
}

TEST_F(RegistryTest, EmptyWalletRejected) {
  Wallet empty("alice", SecretMode::InternalSecret);
  EXPECT_EQ(code_of([&] { registry_.create_did(empty, {}, "alice"); }), ErrorCode::EmptyWallet);
}

TEST_F(RegistryTest, OnboardingIsFreeAndIdempotent) {
  auto did = Did::parse("did:chain:alice");
  auto a = registry_.onboard(did, alice_);
  EXPECT_EQ(registry_.onboard(did, alice_), a);
  EXPECT_EQ(code_of([&] { registry_.onboard(did, bob_); }), ErrorCode::ConfigInvalid);
  EXPECT_TRUE(ledger_.all_transactions().empty());
}

std::vector<ServiceEntry> compartments(std::size_t n) {
  std::vector<ServiceEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"compartment-" + std::to_string(i + 1), ServiceType::Compartment,
                   "did:chain:" + base58_encode(sha256(std::to_string(i))).substr(0, 22)});
  }
  return out;
}

TEST_F(RegistryTest, SizeLimitBoundary) {
  ledger_.open_account("rich", 1'000'000);
  Wallet rich("rich", SecretMode::InternalSecret);
  rich.add_key("key-1", KeyPair::from_seed(Bytes(32, 5)));
  registry_.create_did(rich, compartments(795), "rich");
  auto before = ledger_.balance_of("rich");
  EXPECT_EQ(code_of([&] { registry_.create_did(rich, compartments(796), "rich"); }),
            ErrorCode::PayloadTooLarge);
  EXPECT_EQ(ledger_.balance_of("rich"), before);
}

TEST(RegistryPersistence, ReplaysJournal) {
  testing::TempDir dir;
  auto clock = std::make_shared<SteppingClock>(Timestamp{0});
  Wallet w("a", SecretMode::InternalSecret);
  w.add_key("key-1", KeyPair::from_seed(Bytes(32, 9)));
  DidDocument doc;
  {
    ledger::Ledger ledger({}, clock, dir.path());
    ledger.open_account("a", 500);
    Registry registry(ledger, {}, clock, std::make_shared<RandomSource>(1), dir.path());
    doc = registry.create_did(w, {}, "a");
    DocumentDelta delta;
    delta.add_services = {{"status", ServiceType::Status, "active"}};
    doc = registry.update_did(doc.id, delta, w.sign(registry.signing_payload(doc.id, delta)), "a");
  }
  ledger::Ledger ledger({}, clock, dir.path());
  Registry registry(ledger, {}, clock, std::make_shared<RandomSource>(1), dir.path());
  EXPECT_EQ(registry.resolve(doc.id), doc);
  EXPECT_EQ(registry.list_versions(doc.id).size(), 2u);
  EXPECT_EQ(registry.list_dids("a"), std::vector<Did>{doc.id});
  EXPECT_NE(registry.mint_did(), doc.id);
}

}  // namespace
}  // namespace didchain::identity
