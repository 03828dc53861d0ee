#ifndef RWB_RATIONAL_HPP
#define RWB_RATIONAL_HPP

// Exact rational arithmetic. Backed by boost::multiprecision::cpp_rational,
// which keeps fractions reduced with a positive denominator; the helpers
// below add the parsing, printing and number-theoretic queries the rest of
// the library needs.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace rwb {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return numerator(q); }
inline Integer den(const Rational& q) { return denominator(q); }

// Largest integer <= q.
Integer rat_floor(const Rational& q);

// -1, 0, +1.
int rat_sign(const Rational& q);

// True iff q = m / 2^n in lowest terms (integers count as dyadic).
bool is_dyadic_rational(const Rational& q);

// 2^e for e >= 0, as a rational; pow2(-e) gives the reciprocal.
Rational pow2(long e);

// Exact power q^e for e >= 0.
Rational rat_pow(const Rational& base, unsigned long e);

// For q > 0, the exponent e with 2^e <= q < 2^(e+1).
long rat_floor_log2(const Rational& q);

// Canonical serialization: "p" for integers, otherwise "p/q" with q > 0.
std::string rat_to_string(const Rational& q);

// Parses "p" or "p/q" (optional leading '-'). Returns nullopt on malformed
// input or zero denominator.
std::optional<Rational> rat_parse(const std::string& s);

}  // namespace rwb

#endif
