#ifndef RWB_BAIRE_HPP
#define RWB_BAIRE_HPP

// The Baire-space bridge: points of the space of natural-number sequences
// with a finite explicit head, the block-of-ones lexicographic order
// isomorphism onto [0,1), the zigzag integer codec extending it to a
// continuous bijection onto the line with a right-continuous inverse, and
// transport of reductions along the bridge.

#include <functional>

#include "rwb/pwmap.hpp"
#include "rwb/ternary.hpp"  // OutOfRangeError
#include "rwb/verify.hpp"

namespace rwb {

struct UnsupportedBaireMap : std::runtime_error {
  explicit UnsupportedBaireMap(const std::string& m) : std::runtime_error(m) {}
};

// Zigzag bijection between the naturals and the integers:
// 0, 1, -1, 2, -2, ...
Integer zigzag_dec(const Integer& n);
Integer zigzag_enc(const Integer& k);

// A point of Baire space: the explicit head coordinates followed by a
// tail that is either all zeros (an eventually zero point, head stored
// without trailing zeros) or the block decoding of a non-dyadic rational
// in (0,1) (a depth-bounded point; every coordinate is still computed
// exactly, the depth only budgets interval answers).
struct BairePoint {
  enum class Tail { Zeros, LexInv };
  std::vector<unsigned long long> head;
  Tail tail = Tail::Zeros;
  Rational r;        // Tail::LexInv: non-dyadic value in (0,1)
  size_t depth = 40;

  bool eventually_zero() const { return tail == Tail::Zeros; }
  unsigned long long at(size_t i) const;
  // The shift x+ with x+(i) = x(i+1).
  BairePoint shifted() const;
  // Same point with at least k coordinates pulled into the head.
  BairePoint materialized(size_t k) const;

  static BairePoint eventually_zero_point(std::vector<unsigned long long> prefix);
  bool operator==(const BairePoint& o) const;
};

// Serialization: "b:[2,0,1]" for eventually zero points, otherwise
// "b:gen:<id>:<depth>" with id "lexinv(p/q)" or "[h0,h1]lexinv(p/q)".
std::string baire_point_to_string(const BairePoint& x);
std::optional<BairePoint> baire_point_parse(const std::string& s);

// The order isomorphism (Baire space, lex) -> ([0,1), <): binary
// 0.1^{x(0)} 0 1^{x(1)} 0 ...; exact on eventually zero points, otherwise
// a certified interval of width <= 2^-depth.
EvalResult lex_iso(const BairePoint& x, size_t depth = 40);

// Inverse of lex_iso on [0,1); throws OutOfRangeError outside. Dyadic
// inputs decode to eventually zero points, other rationals to
// depth-bounded points.
BairePoint lex_iso_inv(const Rational& r, size_t depth = 40);

// The continuous bijection onto the line: dec(x(0)) + lex_iso(x+).
EvalResult baire_to_real(const BairePoint& x, size_t depth = 40);

// Its right-continuous inverse (floor for the head coordinate, the
// terminating binary expansion convention for the tail).
BairePoint real_to_baire(const Rational& r, size_t depth = 40);

// True iff for every coordinate i <= coords the coordinates of
// real_to_baire(r + 2^-k) stabilize to those of real_to_baire(r) at some
// k0 <= budget and stay stable up to the budget.
bool right_continuity_probe(const Rational& r, size_t coords, size_t budget);

// Catalog of coordinatewise-definable Baire-space maps.
struct BaireMap {
  enum class Kind { Identity, DropPrefix, Prepend, PrefixSubst, Custom };
  Kind kind = Kind::Identity;
  size_t drop = 0;                                 // DropPrefix
  std::vector<unsigned long long> prefix;          // Prepend
  std::vector<unsigned long long> match, replace;  // PrefixSubst
  // An arbitrary coordinate rule; outside the transport catalog.
  std::function<unsigned long long(const BairePoint&, size_t)> custom;

  static BaireMap identity() { return {}; }
  static BaireMap drop_prefix(size_t k);
  static BaireMap prepend(std::vector<unsigned long long> p);
  // Points starting with `match` get it replaced by `replace`; all other
  // points are fixed.
  static BaireMap prefix_subst(std::vector<unsigned long long> m,
                               std::vector<unsigned long long> r);
};

BairePoint baire_apply(const BaireMap& g, const BairePoint& x);

// A reduction candidate transported along the bridge:
// h = baire_to_real o g o real_to_baire, evaluated on demand.
struct TransportedMap {
  BaireMap g;
  SetExpr source, target;
  size_t depth = 40;
};

// Throws UnsupportedBaireMap unless g is in the catalog.
TransportedMap transport(const BaireMap& g, SetExpr A, SetExpr B, size_t depth = 40);

EvalResult transported_eval(const TransportedMap& h, const Rational& x);

// Grid verification of x in A iff h(x) in B over rational samples of the
// window (certified-interval values verify only against finite unions).
VerificationReport transport_verify(const TransportedMap& h, const IntervalAtom& window,
                                    size_t grid_n, size_t depth = 64);

}  // namespace rwb

#endif
