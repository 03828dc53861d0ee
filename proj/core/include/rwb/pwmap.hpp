#ifndef RWB_PWMAP_HPP
#define RWB_PWMAP_HPP

// Piecewise maps of the line as first-class values: constant, affine,
// Cantor-affine pieces (x -> alpha*f_c(beta*x + gamma) + delta), and squash
// pieces (x -> shift + 1/2 + x/(2(|x|+1)), the order isomorphism of the line
// onto (shift, shift+1)) over cells cut by finite breakpoints, with exact
// evaluation, symbolic composition, exact preimages of finite unions, and a
// line-oriented file format.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rwb/setexpr.hpp"

namespace rwb {

struct PiecewiseMap;

struct Piece {
  enum class Kind { Constant, Affine, CantorAffine, Squash, Deferred };
  Kind kind = Kind::Constant;
  Scalar c;                            // Constant value / Squash shift
  Scalar slope, intercept;             // Affine (slope != 0)
  Rational alpha, beta, gamma, delta;  // CantorAffine (alpha*beta != 0)
  long deferred_id = 0;                // Deferred serialization handle
  // When built by compose(), a Deferred piece keeps the two composed maps
  // (inner first) so that pointwise evaluation still works.
  std::shared_ptr<const std::pair<PiecewiseMap, PiecewiseMap>> comp;

  static Piece constant(Scalar v);
  static Piece affine(Scalar s, Scalar i);
  static Piece cantor_affine(Rational a, Rational b, Rational g, Rational d);
  // The increasing bijection of the line onto (shift, shift+1); exact on
  // Q(sqrt 2) since the field is closed under division.
  static Piece squash(Scalar shift);
  static Piece deferred(long id);
};

// Pieces live on the cells cut by the strictly increasing finite
// breakpoints: piece i applies on [b_{i-1}, b_i) with b_{-1} = -inf and
// b_k = +inf, so pieces.size() == breakpoints.size() + 1.
struct PiecewiseMap {
  std::vector<Scalar> breakpoints;
  std::vector<Piece> pieces;
  bool partial = false;
  FiniteUnion domain;  // meaningful when partial

  size_t cell_of(const Scalar& x) const;

  static PiecewiseMap constant(Scalar v);
  static PiecewiseMap identity();
  static PiecewiseMap affine(Scalar s, Scalar i);
};

struct OutsideDomainError : std::runtime_error {
  OutsideDomainError() : std::runtime_error("point outside the map's domain") {}
};
struct UnresolvableRangeError : std::runtime_error {
  explicit UnresolvableRangeError(const std::string& m) : std::runtime_error(m) {}
};

// Exact value, or a certified enclosing interval of width <= eps (only
// Cantor-affine pieces at irrational arguments are inexact).
struct EvalResult {
  bool exact = true;
  Scalar value;    // when exact
  Scalar lo, hi;   // certified bounds otherwise
};

EvalResult eval(const PiecewiseMap& f, const Scalar& x,
                const Rational& eps = Rational(1, 1099511627776));  // 2^-40

// g after f. Affine/constant pieces compose symbolically; Cantor-affine
// pieces fold with rational affine partners; everything else becomes a
// Deferred piece that still evaluates pointwise.
PiecewiseMap compose(const PiecewiseMap& g, const PiecewiseMap& f);

// Exact f^{-1}(F); throws UnsupportedError on Deferred pieces or when a
// Cantor-affine piece meets an endpoint that is not rational.
FiniteUnion preimage(const PiecewiseMap& f, const FiniteUnion& F);

// True iff adjacent pieces of a total map agree at every shared breakpoint.
bool check_continuity(const PiecewiseMap& f);

// The closed convex hull [lo, hi] of f over a window (exact; Cantor-affine
// pieces are monotone so hulls come from cell endpoints).
std::pair<Scalar, Scalar> image_hull(const PiecewiseMap& f, const IntervalAtom& window);

// Line-oriented format: "MAP total|partial", one "BP <lo> <hi>" per cell
// each followed by a "PIECE ..." line, then "DOM <lo> <hi> <open|closed>
// <open|closed>" lines for partial maps.
std::string map_to_string(const PiecewiseMap& f);
std::optional<PiecewiseMap> map_parse(const std::string& text);

}  // namespace rwb

#endif
