#include "didchain/events/merkle.hpp"

#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"

namespace didchain::events {
namespace {

Hash32 parent(const Hash32& left, const Hash32& right) {
  Sha256 h;
  h.update(ByteSpan(left.data(), left.size()));
  h.update(ByteSpan(right.data(), right.size()));
  return h.finish();
}

}  // namespace

Hash32 merkle_leaf(std::string_view did_text) { return sha256(did_text); }

CompartmentMerkle build_compartment_merkle(std::span<const identity::Did> compartments) {
  if (compartments.empty()) {
    throw Error(ErrorCode::EmptyInput, "merkle tree over zero compartments");
  }
  std::vector<Hash32> level;
  level.reserve(compartments.size());
  for (const auto& did : compartments) level.push_back(merkle_leaf(did.text()));

  CompartmentMerkle out;
  out.proofs.resize(compartments.size());
  std::vector<std::size_t> position(compartments.size());
  for (std::size_t i = 0; i < position.size(); ++i) {
    out.proofs[i].leaf_index = i;
    position[i] = i;
  }

  while (level.size() > 1) {
    for (std::size_t leaf = 0; leaf < position.size(); ++leaf) {
      auto idx = position[leaf];
      if (idx % 2 == 1) {
        out.proofs[leaf].steps.push_back({level[idx - 1], true});
      } else if (idx + 1 < level.size()) {
        out.proofs[leaf].steps.push_back({level[idx + 1], false});
      }
      position[leaf] = idx / 2;
    }
    std::vector<Hash32> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      next.push_back(i + 1 < level.size() ? parent(level[i], level[i + 1]) : level[i]);
    }
    level = std::move(next);
  }
  out.root = level.front();
  return out;
}

bool verify_inclusion(std::string_view did_text, const InclusionProof& proof,
                      const Hash32& root) {
  auto node = merkle_leaf(did_text);
  for (const auto& step : proof.steps) {
    node = step.sibling_on_left ? parent(step.sibling, node) : parent(node, step.sibling);
  }
  return node == root;
}

}  // namespace didchain::events
