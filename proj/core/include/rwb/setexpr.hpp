#ifndef RWB_SETEXPR_HPP
#define RWB_SETEXPR_HPP

// Expressions denoting subsets of the line: finite boolean combinations of
// interval atoms plus a catalog of named generators, with exact membership,
// the endpoint-closure invariants I0/I1, a difference-hierarchy classifier,
// certified inner/outer truncations, and structural block views of the
// order-indexed families.

#include <optional>
#include <stdexcept>
#include <vector>

#include "rwb/embed.hpp"
#include "rwb/interval_algebra.hpp"
#include "rwb/orders.hpp"

namespace rwb {

enum class Gen { Q, Q2, CantorSet, CantorPre, Family34, Family35, AntiComplete, MinCompact, MinFsigma };

struct SetExpr {
  enum class Kind { Atom, Union, Inter, Compl, Named, Join };
  Kind kind = Kind::Atom;
  IntervalAtom atom;               // Kind::Atom
  std::vector<SetExpr> children;   // Union/Inter (>=1), Compl (exactly 1), Join
  Gen gen = Gen::Q;                // Kind::Named
  Rational offset;                 // CantorPre
  SubsetPattern pattern;           // Family34 / Family35 / AntiComplete

  static SetExpr make_atom(IntervalAtom a);
  static SetExpr make_union(std::vector<SetExpr> cs);
  static SetExpr make_inter(std::vector<SetExpr> cs);
  static SetExpr make_compl(SetExpr c);
  // Join places child n inside (n, n+1) via the order-preserving squash
  // t -> n + 1/2 + t / (2(|t|+1)).
  static SetExpr make_join(std::vector<SetExpr> cs);
  static SetExpr named(Gen g);
  static SetExpr cantor_pre(Rational off);
  static SetExpr family34(SubsetPattern a);
  static SetExpr family35(SubsetPattern b);
  static SetExpr anticomplete(SubsetPattern a);
};

enum class Verdict { In, Out, Unknown };

struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& m) : std::runtime_error(m) {}
};
struct DepthExceededError : std::runtime_error {
  explicit DepthExceededError(const std::string& m) : std::runtime_error(m) {}
};

// Exact membership; Unknown only when a certified answer needs more than
// the given descent depth (never guessed).
Verdict member(const SetExpr& s, const Scalar& x, size_t depth = 64);

// I0: every nondegenerate connected component contains its finite
// endpoints; I1 is the same for the complement.
struct IFlags {
  bool i0 = false, i1 = false;
};
IFlags check_I(const SetExpr& s);  // throws UnsupportedError off the rule table

enum class SetClass { Open, Closed, ClopenTrivial, D2, Other };
SetClass classify(const SetExpr& s);  // throws UnsupportedError off the rule table
std::string set_class_name(SetClass c);

// The exact finite-union normal form when s is a boolean combination of
// atoms; nullopt when a named generator or join occurs.
std::optional<FiniteUnion> as_finite_union(const SetExpr& s);

// Maximal components of a finite union, in order.
FiniteUnion components(const FiniteUnion& f);

// Certified window approximation: inner <= S /\ window <= outer.
struct Truncation {
  IntervalAtom window;
  size_t depth = 0;
  FiniteUnion inner, outer;
};
Truncation truncate(const SetExpr& s, const IntervalAtom& window, size_t depth);

// Block view of the order-indexed families inside a window.
struct LBlock {
  OrderElement elem;
  Rational anchor0, anchor1;
  IntervalAtom half_open;  // the [anchor0, anchor1) part
  enum class Pattern { Empty, Singleton, Interval } compact_pattern = Pattern::Empty;
};
struct LStructureView {
  std::vector<LBlock> blocks;
};
LStructureView extract_structure(const SetExpr& s, const IntervalAtom& window, size_t depth);

// The embedding scheme realizing a family generator (Family34, Family35,
// AntiComplete); throws UnsupportedError otherwise.
EmbeddingScheme scheme_for(Gen g);

// locate() lifted to Q(sqrt 2) points: brackets x between rationals and
// refines until both ends agree on the region. The returned offsets are
// those of the rational proxy; callers classify x by exact comparison
// against the block anchors.
Located locate_scalar(const EmbeddingScheme& sch, const Scalar& x, size_t depth = 64);

// Membership of x in f_c^{-1}(Q2 + offset); semi-decided via the ternary
// digit stream when x is irrational.
Verdict cantor_pre_member(const Scalar& x, const Rational& offset, size_t depth);

}  // namespace rwb

#endif
