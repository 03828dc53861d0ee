#ifndef RWB_CONSTRUCTIONS_HPP
#define RWB_CONSTRUCTIONS_HPP

// Executable constructions over the catalog: reductions between the
// order-indexed families from shift-word or ordinal-translate witnesses,
// open-set reductions from endpoint witnesses, tree refinement, closed
// decompositions of countable dense sets, the staged partial reduction to
// the rationals, the minimal-compact stage machinery, and the disjoint
// join upper bound.

#include <set>
#include <string>
#include <vector>

#include "rwb/pwmap.hpp"
#include "rwb/setexpr.hpp"

namespace rwb {

struct WitnessInvalidError : std::runtime_error {
  explicit WitnessInvalidError(const std::string& m) : std::runtime_error(m) {}
};
struct NotAlmostContainedError : std::runtime_error {
  NotAlmostContainedError() : std::runtime_error("pattern is not almost contained in the target") {}
};
struct NotI0Error : std::runtime_error {
  NotI0Error() : std::runtime_error("set has a component missing one of its endpoints") {}
};
struct NotConditionIError : std::runtime_error {
  NotConditionIError() : std::runtime_error("endpoint-closure condition fails on the set or its complement") {}
};
struct EmptyTargetError : std::runtime_error {
  EmptyTargetError() : std::runtime_error("reduction target is empty") {}
};
struct BadAnchorsError : std::runtime_error {
  explicit BadAnchorsError(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Reductions between coded families.

// Total increasing map built from the anchor correspondence xi_k(u) ->
// xi_k(w(u)) along the chain of order-consecutive vectors supported at
// index 0, with the interval-to-point collapse on blocks whose image is
// star-coded; constant beyond the chain. The companion window (where grid
// verification of Family34(a) -> Family34(b) is meaningful) is returned
// through `window` when non-null. Throws WitnessInvalidError unless w maps
// the star coding of a into the star coding of b.
PiecewiseMap iso_to_reduction(const EmbeddingScheme& scheme, const ShiftWord& w,
                              const SubsetPattern& a, const SubsetPattern& b,
                              size_t blocks = 12, IntervalAtom* window = nullptr);

// Reduction witnessing almost-containment: delegates to iso_to_reduction
// with the single negative shift at the least threshold index. Throws
// NotAlmostContainedError when a is not almost contained in b.
PiecewiseMap subsetfin_reduction(const SubsetPattern& a, const SubsetPattern& b,
                                 size_t blocks = 12, IntervalAtom* window = nullptr);

// Pushes the block structure of Family34(a) through f: anchors map to
// their exact images, half-open parts keep or flip their closed end with
// the local direction of f, and compact patterns are carried over.
LStructureView image_structure_check(const PiecewiseMap& f, const SubsetPattern& a,
                                     const IntervalAtom& window, size_t depth);

// Monotone reduction Family35(a) -> Family35(b) from the ordinal translate
// i -> w^{n0} + 1 + i over the finite blocks tiling [0,1), including the
// enlarged-window collapse where the source block is enlarged and the
// target block is not. Throws NotAlmostContainedError.
PiecewiseMap belowQ_reduction(const SubsetPattern& a, const SubsetPattern& b,
                              size_t blocks = 10, IntervalAtom* window = nullptr);

// True iff the singleton patterns extracted from AntiComplete(a) and
// AntiComplete(b) differ on an index visible at the given depth; false
// when the views agree or the depth budget runs out.
bool anticomplete_distinct(const SubsetPattern& a, const SubsetPattern& b, size_t depth);

// Continuous total map with f(U) inside (x, min(y, x+1)) and f(R \ U) = {x},
// built as a piecewise-affine tent over each component of the open set U.
// Throws WitnessInvalidError unless U is a nonempty finite union of open
// intervals, x is outside A, and the target interval meets A.
PiecewiseMap open_to_set_reduction(const SetExpr& U, const SetExpr& A, const Scalar& x,
                                   const ExtScalar& y);

// ---------------------------------------------------------------------------
// Trees.

using TreeNode = std::vector<unsigned>;

struct TreeFamily {
  std::vector<std::set<TreeNode>> trees;  // each prefix-closed, nonempty
  unsigned branching = 2;
  size_t depth = 0;
};

// Disjointification: replaces each tree T_n by the subtrees T_n/s rooted at
// the minimal nodes s of T_n not lying in any earlier tree. Branch sets
// (sequences of length depth+1 threading the trees) are preserved as a
// disjoint union.
TreeFamily tree_refine(const TreeFamily& fam);

// ---------------------------------------------------------------------------
// Decomposition into closed pieces.

// Pairwise disjoint pieces, each closed in the window, whose union agrees
// with S on the window; for the countable dense generators the pieces are
// the depth-indexed prefix of a fixed point enumeration. Throws NotI0Error
// when a component misses one of its finite endpoints.
std::vector<FiniteUnion> decompose_fsigma(const SetExpr& S, const IntervalAtom& window,
                                          size_t depth);

// ---------------------------------------------------------------------------
// Staged reductions.

struct LedgerEntry {
  IntervalAtom interval;
  size_t avoid = 0;  // the interval avoids the first `avoid` forbidden values
};

struct AssignedPiece {
  FiniteUnion set;       // the domain piece (closed, bounded)
  Scalar lo, hi;         // its convex hull
  bool in_set = false;   // piece certified inside the source set
  size_t value_index = 0;  // index into the value enumeration (SIZE_MAX: seed)
  Scalar vlo, vhi;       // image hull (equal for constant pieces)
  Piece map_piece;       // the formula applied on the piece's cell
};

struct StageState {
  size_t n = 0;
  PiecewiseMap f;                    // partial map defined on the pieces
  std::vector<AssignedPiece> gamma;  // sorted by domain position
  std::vector<LedgerEntry> ledger;
  Rational eps = Rational(1);
};

// Map file plus STAGE/EPS/LEDGER lines.
std::string stage_state_to_string(const StageState& st);

// Staged partial reduction of S to Q: stage k assigns the k-th inside
// piece to the least admissible rational p and the k-th outside piece to
// the least admissible shifted irrational sqrt2 + p, keeping the values in
// domain order. Supported sources: Q2 and Family35 patterns. Throws
// NotConditionIError when the endpoint-closure condition fails.
StageState reduce_to_Q(const SetExpr& S, size_t stages);
// All states 0..stages of the same run (state k is reduce_to_Q(S, k)).
std::vector<StageState> reduce_to_Q_trace(const SetExpr& S, size_t stages);

// ---------------------------------------------------------------------------
// Minimal sets.

// truncate() of the minimal compact / minimal F-sigma set over [0,1].
Truncation min_compact_truncation(size_t depth);
Truncation min_fsigma_truncation(size_t depth);

// Staged partial reduction of the minimal compact set to the target:
// inner-truncation components map increasingly into the target, the gaps
// between outer components map to certified complement values. Supported
// targets: CantorSet, MinCompact, and nonempty bounded finite unions.
// Throws EmptyTargetError.
StageState reduce_minimal_compact(const SetExpr& target, size_t stages);

struct GlueResult {
  std::vector<StageState> cells;
  std::vector<Scalar> x_anchors;  // strictly increasing, inside the F-sigma set
  std::vector<Scalar> y_anchors;  // strictly increasing, inside the target
};

// One staged cell map [x_k, x_{k+1}] -> [y_k, y_{k+1}] per cell, reducing
// the minimal F-sigma set to B with matched endpoints. Supported targets:
// Q and Family35 patterns. Throws BadAnchorsError.
GlueResult glue_minimal(const SetExpr& B, size_t cells, size_t stages_per_cell = 6);

// ---------------------------------------------------------------------------
// Joins.

struct JoinResult {
  SetExpr join;
  std::vector<PiecewiseMap> maps;  // maps[n] is the squash onto (n, n+1)
};

// Upper bound of the given sets: homeomorphisms onto the disjoint unit
// bands (n, n+1) and the join expression of the images.
JoinResult upper_bound_join(const std::vector<SetExpr>& sets);

}  // namespace rwb

#endif
