#ifndef RWB_CANTOR_HPP
#define RWB_CANTOR_HPP

// Exact evaluation of the Cantor function at rationals, the middle-thirds
// set membership test, and the preimage test f_c^{-1}(Q2 + offset).

#include "rwb/rational.hpp"
#include "rwb/ternary.hpp"

namespace rwb {

// Exact value of the Cantor function, extended to all of R by the rule
// f_c(x + n) = f_c(x) + n. On [0,1] the value of 0.d1 d2 d3...(base 3) is
// sum (d_n/2) 2^-n when no digit equals 1, and
// sum_{n<m} (d_n/2) 2^-n + 2^-m when the first digit 1 sits at position m.
Rational cantor_value(const Rational& q);

// True iff q lies in the middle-thirds set: q in [0,1] and some base-3
// expansion of q uses only digits 0 and 2 (both expansions of boundary
// points are checked).
bool in_cantor_set(const Rational& q);

// True iff cantor_value(x) - offset is dyadic.
bool cantor_preimage_member(const Rational& x, const Rational& offset);

// The closed plateau f_c^{-1}({v}) for dyadic v in [0,1]; a degenerate
// [t, t] pair for v in {0, 1}. Used to compute exact preimages of interval
// endpoints. Non-dyadic rational v has a single rational preimage point,
// returned as a degenerate pair.
std::pair<Rational, Rational> cantor_level_set(const Rational& v);

}  // namespace rwb

#endif
