#pragma once

#include "didchain/common/bytes.hpp"
#include "didchain/identity/did.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace didchain::events {

struct ProofStep {
  Hash32 sibling{};
  bool sibling_on_left = false;

  bool operator==(const ProofStep&) const = default;
};

struct InclusionProof {
  std::size_t leaf_index = 0;
  std::vector<ProofStep> steps;
};

struct CompartmentMerkle {
  Hash32 root{};
  std::vector<InclusionProof> proofs;  // one per leaf, input order
};

// Leaf = SHA-256 of the DID text.
Hash32 merkle_leaf(std::string_view did_text);

// Leaves in input order; parent = SHA-256(left || right); an odd node at the
// end of a level is promoted unchanged. Throws Error(EmptyInput).
CompartmentMerkle build_compartment_merkle(std::span<const identity::Did> compartments);

bool verify_inclusion(std::string_view did_text, const InclusionProof& proof, const Hash32& root);

}  // namespace didchain::events
