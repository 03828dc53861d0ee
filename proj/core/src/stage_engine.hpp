#ifndef RWB_STAGE_ENGINE_HPP
#define RWB_STAGE_ENGINE_HPP

// Internal helpers shared by the staged constructions: the canonical value
// enumerations, order-respecting piece insertion, and rebuilding the
// partial map of a stage state.

#include <functional>
#include <optional>

#include "rwb/constructions.hpp"

namespace rwb::detail {

// Canonical enumeration of the rationals by |numerator| + denominator,
// starting 0, 1, -1, 2, -2, 1/2, -1/2, ...
Rational nth_rational(size_t k);

// Canonical enumeration of the dyadics in [0, 1) by level: 0, 1/2, 1/4,
// 3/4, 1/8, 3/8, ...
Rational nth_unit_dyadic(size_t k);

// k-th candidate value of the requested membership; nullopt when the
// stream is exhausted.
using ValueStream = std::function<std::optional<Scalar>(size_t)>;

struct ValueChooser {
  ValueStream in_values, out_values;
  size_t budget = 4096;  // candidate indices scanned per insertion
};

// Inserts the piece into the state keeping gamma sorted by position, and
// assigns the least-index admissible value strictly between the values of
// the domain neighbors. A piece with value_index SIZE_MAX keeps its
// preassigned value (seed). Records a ledger entry for inside pieces.
void insert_piece(StageState& st, AssignedPiece piece, const ValueChooser& vc,
                  std::vector<bool>& used_in, std::vector<bool>& used_out);

// Rebuilds st.f from gamma: one cell per piece, cut at the piece lows, so
// every map piece is valid on its closed hull; the domain is the union of
// the piece sets.
void rebuild_map(StageState& st);

// Anchors of the finite-ordinal block i of the two-copy ordinal embedding:
// {s0, s1, s2} with the inner window [s0, s1) and outer window [s1, s2).
struct OrdBlock {
  Rational s0, s1, s2;
};
OrdBlock ord_block(size_t i);

// Certified inside / outside value streams for the coded family with the
// given pattern, spread over the first `blocks` finite-ordinal blocks.
ValueChooser family35_chooser(const SubsetPattern& pattern, size_t blocks);

// p / sqrt2 + p value streams for reductions into the rationals.
ValueChooser rational_chooser();

}  // namespace rwb::detail

#endif
