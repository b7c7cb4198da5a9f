#pragma once

// Embedding construction for chain orders: given an order A and a strictly
// descending chain in an order B, build an embedding of A into the order of
// nonempty doubly-descending chains over A x B.  Each A-element maps to a
// chain whose last pair carries it; later elements either start fresh above
// everything seen so far or extend the image of the least earlier element
// lying above them.

#include <optional>
#include <vector>

#include "order.hpp"

namespace ordlab {

namespace detail {
inline constexpr std::size_t kChainScanLimit = 1u << 20;
}

inline CodeMap embed_from_chain(const OrderPtr& a, const OrderPtr& b, const Stream& bchain,
                                std::size_t prefix) {
  std::vector<Json> elems = enumerate_prefix(*a, prefix);
  CodeMap f;
  if (elems.empty()) return f;

  std::vector<Json> bseq;  // consumed chain entries, checked descending as they arrive
  auto b_at = [&](std::size_t k) -> const Json& {
    while (bseq.size() <= k) {
      auto next = bchain.at(bseq.size());
      if (!next)
        throw WitnessError("descending chain exhausted after " + std::to_string(bseq.size()) +
                           " entries");
      if (!member(*b, *next))
        throw WitnessError("chain entry is not in the right-hand order: " + next->dump());
      if (!bseq.empty() && !less(*b, *next, bseq.back()))
        throw WitnessError("chain is not strictly descending at entry " +
                           std::to_string(bseq.size()));
      bseq.push_back(*next);
    }
    return bseq[k];
  };

  std::vector<Json> images(elems.size());
  std::vector<std::size_t> last_b(elems.size());
  // Any two images first differ where both extend a common prefix, and every
  // proper prefix of an image is itself an image.  Order preservation
  // therefore only needs each appended pair code to beat the codes appended
  // onto the SAME prefix earlier: one running maximum per extended image,
  // with the sentinel index tracking the empty prefix (fresh singletons).
  std::vector<std::optional<BigNat>> slotmax(elems.size() + 1);

  for (std::size_t i = 0; i < elems.size(); ++i) {
    const Json& ai = elems[i];
    // Least earlier element strictly above ai, if any.
    std::optional<std::size_t> v;
    for (std::size_t j = 0; j < i; ++j) {
      if (less(*a, ai, elems[j]) && (!v || less(*a, elems[j], elems[*v]))) v = j;
    }
    std::size_t slot = v ? *v : elems.size();
    std::size_t k = v ? last_b[*v] + 1 : 0;
    BigNat code = enc_pair(ai, b_at(k));
    for (std::size_t scanned = 0; slotmax[slot] && !(code > *slotmax[slot]); ++scanned) {
      if (scanned > detail::kChainScanLimit)
        throw WitnessError("no chain entry yields a fresh pair code");
      ++k;
      code = enc_pair(ai, b_at(k));
    }
    Json chain = v ? images[*v] : Json::array();
    chain.push_back(Json::array({ai, b_at(k)}));
    images[i] = std::move(chain);
    last_b[i] = k;
    slotmax[slot] = std::move(code);
  }

  for (std::size_t i = 0; i < elems.size(); ++i) f.pairs.push_back({elems[i], images[i]});
  return f;
}

}  // namespace ordlab
