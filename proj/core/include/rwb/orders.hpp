#ifndef RWB_ORDERS_HPP
#define RWB_ORDERS_HPP

// Scattered linear orders: finitely supported integer sequences under the
// anti-lexicographic order, shift words acting on them, subset patterns and
// the star coding, and ordinals below omega^omega in Cantor normal form.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rwb/scalar.hpp"

namespace rwb {

// ---------------------------------------------------------------------------
// Finitely supported integer sequences, anti-lexicographic order.

struct ZVec {
  // index -> nonzero value; absent indices are zero.
  std::map<size_t, long long> entries;

  long long at(size_t i) const {
    auto it = entries.find(i);
    return it == entries.end() ? 0 : it->second;
  }
  void set(size_t i, long long v) {
    if (v == 0) entries.erase(i);
    else entries[i] = v;
  }
  bool is_zero() const { return entries.empty(); }
  // Largest supported index, or nullopt for the zero vector.
  std::optional<size_t> top_index() const {
    if (entries.empty()) return std::nullopt;
    return entries.rbegin()->first;
  }
  static ZVec unit(size_t i, long long v = 1) {
    ZVec z;
    z.set(i, v);
    return z;
  }
  bool operator==(const ZVec& o) const { return entries == o.entries; }
};

// Compare at the largest index where the vectors differ.
Cmp zvec_cmp(const ZVec& x, const ZVec& y);

inline bool operator<(const ZVec& x, const ZVec& y) { return zvec_cmp(x, y) == Cmp::LT; }

// Serialization: z:[i0=v0,i1=v1,...] with indices ascending; z:[] is zero.
std::string zvec_to_string(const ZVec& z);
std::optional<ZVec> zvec_parse(const std::string& s);

// ---------------------------------------------------------------------------
// Shift words.

struct ShiftLetter {
  size_t index;
  int direction;  // +1 or -1
};

// Acts by left-to-right composition of the letters.
struct ShiftWord {
  std::vector<ShiftLetter> letters;

  static ShiftWord identity() { return {}; }
  static ShiftWord single(size_t n, int dir) { return {{{n, dir}}}; }
  ShiftWord inverse() const;
  // One above the largest index occurring in the word (0 for the identity);
  // the word acts as the identity on every vector whose support reaches
  // this index or beyond.
  size_t fixed_from() const;
};

// Each letter alters its coordinate by +/-1 only when all higher
// coordinates vanish; otherwise it leaves the vector unchanged.
ZVec apply_shift(const ShiftWord& w, const ZVec& x);

// ---------------------------------------------------------------------------
// Subset patterns: F union [tail, infinity).

struct SubsetPattern {
  std::set<size_t> finite;
  std::optional<size_t> tail;

  bool contains(size_t n) const {
    if (tail && n >= *tail) return true;
    return finite.count(n) > 0;
  }
  bool operator==(const SubsetPattern& o) const;
  // Normalize: drop finite elements absorbed by the tail, shrink the tail
  // over contiguous finite elements just below it.
  void normalize();
};

// Serialization: {0,3} or {0,3}+tail(7); {} is empty.
std::string pattern_to_string(const SubsetPattern& a);
std::optional<SubsetPattern> pattern_parse(const std::string& s);

// a subset of b up to finitely many exceptions; decidable on patterns.
bool subset_fin(const SubsetPattern& a, const SubsetPattern& b);
// Least n0 such that every n >= n0 in a is also in b (requires subset_fin).
size_t subset_fin_threshold(const SubsetPattern& a, const SubsetPattern& b);

// Membership in the star coding of a: true iff z <= 0 or z is the marker
// with a single 1 at some position n in a.
bool astar_member(const SubsetPattern& a, const ZVec& z);

// Decides whether the automorphism named by w maps the star coding of a
// into the star coding of b. Exact: the image of 0 must be <= 0, markers
// below the word's fixed index are checked pointwise, and markers at or
// beyond it are fixed by w, so they need n in b.
bool sigma_preserves_star(const SubsetPattern& a, const SubsetPattern& b, const ShiftWord& w);

// ---------------------------------------------------------------------------
// Ordinals below omega^omega, Cantor normal form.

struct OrdinalCNF {
  // (exponent, coefficient) with exponents strictly decreasing and
  // coefficients positive; empty list is 0.
  std::vector<std::pair<size_t, unsigned long long>> terms;

  static OrdinalCNF zero() { return {}; }
  static OrdinalCNF finite(unsigned long long n) {
    OrdinalCNF o;
    if (n) o.terms.push_back({0, n});
    return o;
  }
  static OrdinalCNF omega_pow(size_t e, unsigned long long c = 1) {
    OrdinalCNF o;
    if (c) o.terms.push_back({e, c});
    return o;
  }
  bool is_zero() const { return terms.empty(); }
  size_t degree() const { return terms.empty() ? 0 : terms.front().first; }
  bool operator==(const OrdinalCNF& o) const { return terms == o.terms; }
};

Cmp ord_cmp(const OrdinalCNF& a, const OrdinalCNF& b);
inline bool operator<(const OrdinalCNF& a, const OrdinalCNF& b) { return ord_cmp(a, b) == Cmp::LT; }

// Ordinal addition (left absorption below the leading exponent of b).
OrdinalCNF ord_add(const OrdinalCNF& a, const OrdinalCNF& b);

// Successor a + 1.
OrdinalCNF ord_succ(const OrdinalCNF& a);

// True iff a is a limit ordinal (nonzero with no constant term).
bool ord_is_limit(const OrdinalCNF& a);

// Serialization: w^e1*c1+... with c-only terms printed as plain integers
// and w^1 printed as w; 0 is "0".
std::string ord_to_string(const OrdinalCNF& a);
std::optional<OrdinalCNF> ord_parse(const std::string& s);

}  // namespace rwb

#endif
