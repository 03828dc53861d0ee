#ifndef RWB_INTERVAL_ALGEBRA_HPP
#define RWB_INTERVAL_ALGEBRA_HPP

// Finite unions of interval atoms with an exact boolean algebra. The normal
// form is the ordered list of maximal connected components (disjoint,
// non-touching atoms), so components and endpoint scans are immediate.

#include <optional>
#include <string>
#include <vector>

#include "rwb/scalar.hpp"

namespace rwb {

using FiniteUnion = std::vector<IntervalAtom>;

bool atom_eq(const IntervalAtom& a, const IntervalAtom& b);

// Intersection of two atoms; nullopt when empty.
std::optional<IntervalAtom> atom_intersect(const IntervalAtom& a, const IntervalAtom& b);

// Normal form: atoms sorted, pairwise disjoint and non-adjacent; each atom
// is a maximal connected component of the union.
FiniteUnion fu_normalize(FiniteUnion f);

FiniteUnion fu_union(const FiniteUnion& a, const FiniteUnion& b);
FiniteUnion fu_intersect(const FiniteUnion& a, const FiniteUnion& b);
// Complement within the whole extended line.
FiniteUnion fu_complement(const FiniteUnion& a);

bool fu_contains(const FiniteUnion& f, const Scalar& x);
bool fu_equal(const FiniteUnion& a, const FiniteUnion& b);
bool fu_subset(const FiniteUnion& a, const FiniteUnion& b);
bool fu_is_empty(const FiniteUnion& a);
bool fu_is_whole_line(const FiniteUnion& a);

// Sum of component lengths; throws BadIntervalError on an unbounded union.
Scalar fu_total_length(const FiniteUnion& a);

std::string fu_to_string(const FiniteUnion& a);

}  // namespace rwb

#endif
