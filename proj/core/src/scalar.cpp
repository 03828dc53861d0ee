#include "rwb/scalar.hpp"

#include <tuple>
#include <utility>

namespace rwb {

Scalar Scalar::operator/(const Scalar& o) const {
  // Multiply by the conjugate: 1/(a+b*sqrt2) = (a-b*sqrt2)/(a^2-2b^2).
  Rational n = o.a * o.a - 2 * o.b * o.b;
  if (n == 0) throw std::domain_error("division by zero scalar");
  Scalar conj{o.a / n, -o.b / n};
  return *this * conj;
}

int scalar_sign(const Scalar& x) {
  int sa = rat_sign(x.a), sb = rat_sign(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 against 2b^2. With a > 0 > b the value is
  // positive iff a^2 > 2b^2; with a < 0 < b it is positive iff 2b^2 > a^2.
  Rational d = x.a * x.a - 2 * x.b * x.b;
  int sd = rat_sign(d);
  if (sd == 0) return 0;  // impossible for rational a, b not both zero
  return sa > 0 ? sd : -sd;
}

Cmp scalar_cmp(const Scalar& x, const Scalar& y) {
  int s = scalar_sign(x - y);
  return s < 0 ? Cmp::LT : (s > 0 ? Cmp::GT : Cmp::EQ);
}

bool is_dyadic(const Scalar& x) {
  if (x.b != 0) throw NonRationalError();
  return is_dyadic_rational(x.a);
}

std::pair<Rational, Rational> scalar_bracket(const Scalar& x, unsigned iters) {
  if (x.b == 0) return {x.a, x.a};
  // Pell convergents p/q of sqrt(2): p <- p + 2q, q <- p + q. Consecutive
  // convergents straddle sqrt(2).
  Integer p = 1, q = 1;
  for (unsigned i = 0; i < iters; ++i) {
    Integer np = p + 2 * q, nq = p + q;
    p = np;
    q = nq;
  }
  Rational c1(p, q), c2(p + 2 * q, p + q);
  Rational lo_r = c1 < c2 ? c1 : c2, hi_r = c1 < c2 ? c2 : c1;
  if (x.b < 0) std::swap(lo_r, hi_r);
  return {x.a + x.b * lo_r, x.a + x.b * hi_r};
}

Integer scalar_floor(const Scalar& x) {
  if (x.b == 0) return rat_floor(x.a);
  // Refine the bracket until it is narrower than 1; the bracket width is
  // |b| times the convergent gap, so large coefficients need more steps.
  unsigned iters = 3;
  auto [lo, hi] = scalar_bracket(x, iters);
  while (hi - lo >= 1) {
    iters += 2;
    std::tie(lo, hi) = scalar_bracket(x, iters);
  }
  Integer n = rat_floor(lo);
  while (Scalar(Rational(n + 1)) <= x) ++n;
  while (Scalar(Rational(n)) > x) --n;
  return n;
}

long scalar_floor_log2(const Scalar& x) {
  if (scalar_sign(x) <= 0) throw std::domain_error("scalar_floor_log2 needs a positive argument");
  if (x.b == 0) return rat_floor_log2(x.a);
  unsigned iters = 3;
  auto [lo, hi] = scalar_bracket(x, iters);
  while (rat_sign(lo) <= 0) {
    iters += 2;
    std::tie(lo, hi) = scalar_bracket(x, iters);
  }
  long e = rat_floor_log2(lo);
  while (Scalar(pow2(e + 1)) <= x) ++e;
  while (Scalar(pow2(e)) > x) --e;
  return e;
}

std::string scalar_to_string(const Scalar& x) {
  if (x.b == 0) return rat_to_string(x.a);
  return rat_to_string(x.a) + " + " + rat_to_string(x.b) + "*sqrt2";
}

std::optional<Scalar> scalar_parse(const std::string& s) {
  // Accepted forms: "p/q", "p/q + r/s*sqrt2", "p/q - r/s*sqrt2",
  // "r/s*sqrt2", "sqrt2", "-sqrt2". Whitespace around tokens is ignored.
  auto trim = [](std::string t) {
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return t.substr(b, e - b + 1);
  };
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;

  auto parse_sqrt2_term = [&](std::string term) -> std::optional<Rational> {
    term = trim(term);
    auto star = term.find("*sqrt2");
    if (star != std::string::npos && star + 6 == term.size()) {
      auto coeff = rat_parse(trim(term.substr(0, star)));
      if (!coeff) return std::nullopt;
      return *coeff;
    }
    if (term == "sqrt2") return Rational(1);
    if (term == "-sqrt2") return Rational(-1);
    return std::nullopt;
  };

  // Split at a top-level " + " or " - " that separates the two parts.
  // Search from position 1 so a leading sign stays with the first term.
  for (size_t i = 1; i < t.size(); ++i) {
    if (t[i] != '+' && t[i] != '-') continue;
    // A sign directly following '/', digit boundary inside a number never
    // occurs after canonical printing; require surrounding whitespace or a
    // digit/sqrt2 boundary.
    std::string left = trim(t.substr(0, i));
    std::string right = trim(t.substr(i + 1));
    if (left.empty() || right.empty()) continue;
    auto a = rat_parse(left);
    auto b = parse_sqrt2_term(right);
    if (a && b) {
      if (t[i] == '-') *b = -*b;
      return Scalar(*a, *b);
    }
  }
  if (auto a = rat_parse(t)) return Scalar(*a);
  if (auto b = parse_sqrt2_term(t)) return Scalar(Rational(0), *b);
  return std::nullopt;
}

Cmp ext_cmp(const ExtScalar& x, const ExtScalar& y) {
  using T = ExtScalar::Tag;
  if (x.tag == T::Finite && y.tag == T::Finite) return scalar_cmp(x.value, y.value);
  auto rank = [](T t) { return t == T::MinusInf ? -1 : (t == T::PlusInf ? 1 : 0); };
  int rx = rank(x.tag), ry = rank(y.tag);
  return rx < ry ? Cmp::LT : (rx > ry ? Cmp::GT : Cmp::EQ);
}

std::string ext_to_string(const ExtScalar& x) {
  switch (x.tag) {
    case ExtScalar::Tag::PlusInf: return "inf";
    case ExtScalar::Tag::MinusInf: return "-inf";
    default: return scalar_to_string(x.value);
  }
}

std::optional<ExtScalar> ext_parse(const std::string& s) {
  if (s == "inf") return ExtScalar::plus_inf();
  if (s == "-inf") return ExtScalar::minus_inf();
  if (auto v = scalar_parse(s)) return ExtScalar(*v);
  return std::nullopt;
}

IntervalAtom::IntervalAtom(ExtScalar l, ExtScalar h, bool lc, bool hc)
    : lo(std::move(l)), hi(std::move(h)), lo_closed(lc), hi_closed(hc) {
  if (lo > hi) throw BadIntervalError("interval lower end above upper end");
  if (lo == hi && !(lo_closed && hi_closed))
    throw BadIntervalError("degenerate interval must be a closed point");
  if (!lo.finite() && lo_closed) throw BadIntervalError("closed flag on infinite endpoint");
  if (!hi.finite() && hi_closed) throw BadIntervalError("closed flag on infinite endpoint");
  if (lo.tag == ExtScalar::Tag::PlusInf || hi.tag == ExtScalar::Tag::MinusInf)
    throw BadIntervalError("interval endpoint order with infinities invalid");
}

bool IntervalAtom::is_empty_open() const { return false; }

bool IntervalAtom::contains(const Scalar& x) const {
  ExtScalar e(x);
  Cmp cl = ext_cmp(e, lo);
  if (cl == Cmp::LT || (cl == Cmp::EQ && !lo_closed)) return false;
  Cmp ch = ext_cmp(e, hi);
  if (ch == Cmp::GT || (ch == Cmp::EQ && !hi_closed)) return false;
  return true;
}

bool IntervalAtom::contains_atom(const IntervalAtom& o) const {
  Cmp cl = ext_cmp(o.lo, lo);
  if (cl == Cmp::LT) return false;
  if (cl == Cmp::EQ && o.lo_closed && !lo_closed) return false;
  Cmp ch = ext_cmp(o.hi, hi);
  if (ch == Cmp::GT) return false;
  if (ch == Cmp::EQ && o.hi_closed && !hi_closed) return false;
  return true;
}

std::string interval_to_string(const IntervalAtom& iv) {
  std::string s = iv.lo_closed ? "[" : "(";
  s += ext_to_string(iv.lo);
  s += ", ";
  s += ext_to_string(iv.hi);
  s += iv.hi_closed ? "]" : ")";
  return s;
}

}  // namespace rwb
