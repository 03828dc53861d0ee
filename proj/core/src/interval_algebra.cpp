#include "rwb/interval_algebra.hpp"

#include <algorithm>

namespace rwb {

namespace {

// Starts-before: an endpoint that includes its boundary starts earlier.
bool starts_before(const IntervalAtom& a, const IntervalAtom& b) {
  Cmp c = ext_cmp(a.lo, b.lo);
  if (c != Cmp::EQ) return c == Cmp::LT;
  return a.lo_closed && !b.lo_closed;
}

// True iff a's closure meets b when a.hi <= b.lo territory is in question:
// atoms overlap or touch so their union is one interval.
bool mergeable(const IntervalAtom& cur, const IntervalAtom& nxt) {
  Cmp c = ext_cmp(nxt.lo, cur.hi);
  if (c == Cmp::LT) return true;
  if (c == Cmp::GT) return false;
  return cur.hi_closed || nxt.lo_closed;
}

}  // namespace

bool atom_eq(const IntervalAtom& a, const IntervalAtom& b) {
  return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed && a.hi_closed == b.hi_closed;
}

std::optional<IntervalAtom> atom_intersect(const IntervalAtom& a, const IntervalAtom& b) {
  ExtScalar lo = a.lo;
  bool lc = a.lo_closed;
  Cmp c = ext_cmp(b.lo, lo);
  if (c == Cmp::GT) {
    lo = b.lo;
    lc = b.lo_closed;
  } else if (c == Cmp::EQ) {
    lc = lc && b.lo_closed;
  }
  ExtScalar hi = a.hi;
  bool hc = a.hi_closed;
  c = ext_cmp(b.hi, hi);
  if (c == Cmp::LT) {
    hi = b.hi;
    hc = b.hi_closed;
  } else if (c == Cmp::EQ) {
    hc = hc && b.hi_closed;
  }
  Cmp order = ext_cmp(lo, hi);
  if (order == Cmp::GT) return std::nullopt;
  if (order == Cmp::EQ && !(lc && hc)) return std::nullopt;
  return IntervalAtom(lo, hi, lc, hc);
}

FiniteUnion fu_normalize(FiniteUnion f) {
  std::sort(f.begin(), f.end(), starts_before);
  FiniteUnion out;
  for (auto& a : f) {
    if (!out.empty() && mergeable(out.back(), a)) {
      IntervalAtom& cur = out.back();
      Cmp c = ext_cmp(a.hi, cur.hi);
      if (c == Cmp::GT) {
        cur = IntervalAtom(cur.lo, a.hi, cur.lo_closed, a.hi_closed);
      } else if (c == Cmp::EQ && a.hi_closed && !cur.hi_closed) {
        cur = IntervalAtom(cur.lo, cur.hi, cur.lo_closed, true);
      }
    } else {
      out.push_back(a);
    }
  }
  return out;
}

FiniteUnion fu_union(const FiniteUnion& a, const FiniteUnion& b) {
  FiniteUnion f = a;
  f.insert(f.end(), b.begin(), b.end());
  return fu_normalize(std::move(f));
}

FiniteUnion fu_intersect(const FiniteUnion& a, const FiniteUnion& b) {
  // Merge-sweep over the two normal forms; atoms within each side are
  // disjoint and non-touching, so once a pair is resolved the side whose
  // atom ends first can never meet anything later on the other side.
  FiniteUnion x = fu_normalize(a), y = fu_normalize(b);
  FiniteUnion out;
  size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (auto z = atom_intersect(x[i], y[j])) out.push_back(*z);
    Cmp c = ext_cmp(x[i].hi, y[j].hi);
    if (c == Cmp::LT) ++i;
    else if (c == Cmp::GT) ++j;
    else {
      ++i;
      ++j;
    }
  }
  return fu_normalize(std::move(out));
}

FiniteUnion fu_complement(const FiniteUnion& a) {
  FiniteUnion f = fu_normalize(a);
  FiniteUnion out;
  ExtScalar cursor = ExtScalar::minus_inf();
  bool cursor_closed = false;  // whether the complement piece starts closed
  for (auto& atom : f) {
    Cmp c = ext_cmp(cursor, atom.lo);
    bool nonempty = c == Cmp::LT || (c == Cmp::EQ && cursor_closed && !atom.lo_closed);
    if (nonempty) {
      bool lc = cursor.finite() && cursor_closed;
      bool hc = atom.lo.finite() && !atom.lo_closed;
      if (!(ext_cmp(cursor, atom.lo) == Cmp::EQ && !(lc && hc)))
        out.push_back(IntervalAtom(cursor, atom.lo, lc, hc));
    }
    if (!atom.hi.finite()) return fu_normalize(std::move(out));
    cursor = atom.hi;
    cursor_closed = !atom.hi_closed;
  }
  if (cursor.finite()) {
    out.push_back(IntervalAtom(cursor, ExtScalar::plus_inf(), cursor_closed, false));
  } else if (cursor.tag == ExtScalar::Tag::MinusInf) {
    out.push_back(IntervalAtom::whole_line());
  }
  return fu_normalize(std::move(out));
}

bool fu_contains(const FiniteUnion& f, const Scalar& x) {
  for (auto& a : f)
    if (a.contains(x)) return true;
  return false;
}

bool fu_equal(const FiniteUnion& a, const FiniteUnion& b) {
  FiniteUnion na = fu_normalize(a), nb = fu_normalize(b);
  if (na.size() != nb.size()) return false;
  for (size_t i = 0; i < na.size(); ++i)
    if (!atom_eq(na[i], nb[i])) return false;
  return true;
}

bool fu_subset(const FiniteUnion& a, const FiniteUnion& b) {
  return fu_is_empty(fu_intersect(a, fu_complement(b)));
}

bool fu_is_empty(const FiniteUnion& a) { return fu_normalize(a).empty(); }

bool fu_is_whole_line(const FiniteUnion& a) {
  FiniteUnion f = fu_normalize(a);
  return f.size() == 1 && !f[0].lo.finite() && !f[0].hi.finite();
}

Scalar fu_total_length(const FiniteUnion& a) {
  Scalar total;
  for (auto& atom : fu_normalize(a)) {
    if (!atom.lo.finite() || !atom.hi.finite())
      throw BadIntervalError("total length of an unbounded union");
    total = total + (atom.hi.value - atom.lo.value);
  }
  return total;
}

std::string fu_to_string(const FiniteUnion& a) {
  FiniteUnion f = fu_normalize(a);
  if (f.empty()) return "{}";
  std::string s;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) s += " u ";
    s += interval_to_string(f[i]);
  }
  return s;
}

}  // namespace rwb
