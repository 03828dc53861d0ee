#ifndef RWB_EMBED_HPP
#define RWB_EMBED_HPP

// Concrete rational-valued embeddings of the supported scattered orders
// into the line, with certified margins, plus the inverse search (locate).
//
// Zomega (finitely supported integer sequences, anti-lex):
//   level 0: k -> k/(|k|+1); level n keeps top coordinate 0 verbatim and
//   places top coordinate k>0 affinely inside
//   [b+2-2^(1-k), b+2-2^(1-k)+2^(-k-2)] with b = 2(n-1)+1 the hull bound of
//   the level below; mirrored for k<0. The positive copies accumulate at
//   b+2 = 2n+1, so every level-n value stays inside (-(2n+1), 2n+1) and the
//   full range is cofinal and coinitial.
//
// OrdOmegaPow (all ordinals below omega^omega):
//   finite k sits at 1-2^-k; ordinals of CNF degree d >= 1 occupy the block
//   [2-2^(1-d), 2-2^-d), subdivided by the leading coefficient c >= 1 into
//   [1-2^(1-c), 1-2^-c) of the block and recursing on the CNF remainder
//   (normalized by the union of the lower-degree blocks). Limit values are
//   attained exactly, so the embedding is continuous at limits.
//
// OmegaSqReversed (omega^2 with the reverse order):
//   eta(w*m) = -2m, eta(w*m+k) = -(2m+1-2^-k); the unit jump across each
//   omega-limit realizes discreteness.
//
// Tensor copies: element i carries a private radius r(i) (half the exact
// gap up to the next element, or 1/2 where no neighbor exists above) and
// copy k of i sits at embed(i) + k*r(i)/4.

#include <optional>

#include "rwb/orders.hpp"

namespace rwb {

enum class OrderTag { Zomega, OrdOmegaPow, OmegaSqReversed };

struct OrderElement {
  OrderTag order = OrderTag::Zomega;
  ZVec z;        // Zomega point
  OrdinalCNF o;  // ordinal point for the other two orders
  unsigned copy = 0;

  static OrderElement zv(ZVec v, unsigned c = 0) {
    OrderElement e;
    e.order = OrderTag::Zomega;
    e.z = std::move(v);
    e.copy = c;
    return e;
  }
  static OrderElement ord(OrderTag t, OrdinalCNF v, unsigned c = 0) {
    OrderElement e;
    e.order = t;
    e.o = std::move(v);
    e.copy = c;
    return e;
  }
  bool operator==(const OrderElement& other) const {
    return order == other.order && copy == other.copy &&
           (order == OrderTag::Zomega ? z == other.z : o == other.o);
  }
};

struct WrongOrderError : std::runtime_error {
  WrongOrderError() : std::runtime_error("element does not belong to this order") {}
};

struct Located {
  enum class Kind { Anchor, PrivateInterval, Gap, BandLimit, DepthExceeded } kind;
  // Anchor: elem + copy. PrivateInterval: elem + offset from its base value.
  // Gap: elem (lower neighbor) + upper when an upper neighbor exists.
  // BandLimit: band_level + the accumulation value limit_point.
  std::optional<OrderElement> elem;
  unsigned copy = 0;
  Rational offset;
  std::optional<OrderElement> upper;
  long band_level = 0;
  Rational limit_point;

  static Located depth_exceeded() { return {Kind::DepthExceeded, {}, 0, {}, {}, 0, {}}; }
};

struct EmbeddingScheme {
  OrderTag order = OrderTag::Zomega;
  unsigned arity = 1;  // number of tensor copies, at most 4

  static EmbeddingScheme zomega(unsigned arity) { return {OrderTag::Zomega, arity}; }
  static EmbeddingScheme ord_pow(unsigned arity) { return {OrderTag::OrdOmegaPow, arity}; }
  static EmbeddingScheme omega_sq_rev(unsigned arity) { return {OrderTag::OmegaSqReversed, arity}; }

  // Order comparison (reversed for OmegaSqReversed), copy as tie-break.
  Cmp cmp(const OrderElement& a, const OrderElement& b) const;

  // Base embedding, ignoring the copy index.
  Rational base_embed(const OrderElement& e) const;
  // Embedding with the copy offset: base + copy * radius / 4.
  Rational embed(const OrderElement& e) const;
  // The successor in the order, if the element has one.
  std::optional<OrderElement> successor(const OrderElement& e) const;
  // Private radius: half the exact gap up to the next element (1/2 when no
  // element lies above).
  Rational private_radius(const OrderElement& e) const;
  // Anchor of copy k (k < arity).
  Rational xi(const OrderElement& e, unsigned k) const;

  Located locate(const Rational& x, size_t max_depth = 64) const;
};

}  // namespace rwb

#endif
