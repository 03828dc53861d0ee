#ifndef RWB_SCALAR_HPP
#define RWB_SCALAR_HPP

// Scalars of the quadratic field Q(sqrt 2), their extension by +/-infinity,
// and interval atoms over the extended line. Comparison is exact: the sign
// of a + b*sqrt(2) is decided from the signs of a, b and a^2 - 2b^2.

#include <optional>
#include <string>
#include <utility>

#include "rwb/rational.hpp"

namespace rwb {

struct Scalar {
  Rational a;  // rational part
  Rational b;  // coefficient of sqrt(2)

  Scalar() = default;
  Scalar(Rational ra) : a(std::move(ra)) {}
  Scalar(Rational ra, Rational rb) : a(std::move(ra)), b(std::move(rb)) {}
  static Scalar sqrt2(Rational coeff = Rational(1)) { return Scalar(Rational(0), std::move(coeff)); }

  bool is_rational() const { return b == 0; }

  Scalar operator+(const Scalar& o) const { return {a + o.a, b + o.b}; }
  Scalar operator-(const Scalar& o) const { return {a - o.a, b - o.b}; }
  Scalar operator-() const { return {-a, -b}; }
  Scalar operator*(const Scalar& o) const {
    return {a * o.a + 2 * b * o.b, a * o.b + b * o.a};
  }
  Scalar operator/(const Scalar& o) const;

  friend Scalar operator*(const Rational& r, const Scalar& s) { return {r * s.a, r * s.b}; }
};

// -1, 0, +1 according to the real value of x.
int scalar_sign(const Scalar& x);

enum class Cmp { LT, EQ, GT };

Cmp scalar_cmp(const Scalar& x, const Scalar& y);

inline bool operator==(const Scalar& x, const Scalar& y) { return x.a == y.a && x.b == y.b; }
inline bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
inline bool operator<(const Scalar& x, const Scalar& y) { return scalar_cmp(x, y) == Cmp::LT; }
inline bool operator<=(const Scalar& x, const Scalar& y) { return scalar_cmp(x, y) != Cmp::GT; }
inline bool operator>(const Scalar& x, const Scalar& y) { return scalar_cmp(x, y) == Cmp::GT; }
inline bool operator>=(const Scalar& x, const Scalar& y) { return scalar_cmp(x, y) != Cmp::LT; }

// Raised by operations whose argument must be rational (b = 0).
struct NonRationalError : std::runtime_error {
  NonRationalError() : std::runtime_error("scalar has a nonzero sqrt(2) part") {}
};

// True iff x is rational with a power-of-two denominator; throws
// NonRationalError when b != 0.
bool is_dyadic(const Scalar& x);

// Largest integer <= x, exact for every scalar (located via Pell-convergent
// bounds on sqrt(2) and confirmed by exact comparison).
Integer scalar_floor(const Scalar& x);

// Rational bounds lo < x < hi from the iters-th pair of Pell convergents
// of sqrt(2); for rational x both bounds equal x. The width shrinks roughly
// by a factor 5.8 per extra iteration.
std::pair<Rational, Rational> scalar_bracket(const Scalar& x, unsigned iters);

// For x > 0, the exponent e with 2^e <= x < 2^(e+1).
long scalar_floor_log2(const Scalar& x);

// Serialization: "p/q" when b = 0, otherwise "p/q + r/s*sqrt2" (the rational
// part is kept even when zero only if the sqrt2 part is also zero).
std::string scalar_to_string(const Scalar& x);
std::optional<Scalar> scalar_parse(const std::string& s);

// ---------------------------------------------------------------------------

struct ExtScalar {
  enum class Tag { Finite, PlusInf, MinusInf } tag = Tag::Finite;
  Scalar value;  // meaningful only when tag == Finite

  ExtScalar() = default;
  ExtScalar(Scalar v) : tag(Tag::Finite), value(std::move(v)) {}
  ExtScalar(Rational v) : tag(Tag::Finite), value(Scalar(std::move(v))) {}
  static ExtScalar plus_inf() { ExtScalar e; e.tag = Tag::PlusInf; return e; }
  static ExtScalar minus_inf() { ExtScalar e; e.tag = Tag::MinusInf; return e; }

  bool finite() const { return tag == Tag::Finite; }
};

Cmp ext_cmp(const ExtScalar& x, const ExtScalar& y);

inline bool operator==(const ExtScalar& x, const ExtScalar& y) { return ext_cmp(x, y) == Cmp::EQ; }
inline bool operator!=(const ExtScalar& x, const ExtScalar& y) { return !(x == y); }
inline bool operator<(const ExtScalar& x, const ExtScalar& y) { return ext_cmp(x, y) == Cmp::LT; }
inline bool operator<=(const ExtScalar& x, const ExtScalar& y) { return ext_cmp(x, y) != Cmp::GT; }
inline bool operator>(const ExtScalar& x, const ExtScalar& y) { return ext_cmp(x, y) == Cmp::GT; }
inline bool operator>=(const ExtScalar& x, const ExtScalar& y) { return ext_cmp(x, y) != Cmp::LT; }

// Serializes finite values like scalar_to_string; infinities as inf / -inf.
std::string ext_to_string(const ExtScalar& x);
std::optional<ExtScalar> ext_parse(const std::string& s);

// ---------------------------------------------------------------------------

// One interval of the extended line. Invariants: lo <= hi; a singleton
// (lo == hi) is closed on both sides; closed flags are forbidden on
// infinite endpoints.
struct IntervalAtom {
  ExtScalar lo, hi;
  bool lo_closed = true, hi_closed = true;

  IntervalAtom() = default;
  IntervalAtom(ExtScalar l, ExtScalar h, bool lc, bool hc);

  static IntervalAtom point(const Scalar& x) { return IntervalAtom(x, x, true, true); }
  static IntervalAtom closed(const Scalar& l, const Scalar& h) { return IntervalAtom(l, h, true, true); }
  static IntervalAtom open(const ExtScalar& l, const ExtScalar& h) { return IntervalAtom(l, h, false, false); }
  static IntervalAtom whole_line() { return IntervalAtom(ExtScalar::minus_inf(), ExtScalar::plus_inf(), false, false); }

  bool is_point() const { return lo == hi; }
  bool is_empty_open() const;  // degenerate (lo==hi open) never constructed; kept for checks
  bool contains(const Scalar& x) const;
  bool contains_atom(const IntervalAtom& other) const;
};

struct BadIntervalError : std::runtime_error {
  explicit BadIntervalError(const std::string& m) : std::runtime_error(m) {}
};

std::string interval_to_string(const IntervalAtom& iv);

}  // namespace rwb

#endif
