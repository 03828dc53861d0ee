#include "rwb/embed.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

namespace rwb {

namespace {

// Hull bound of structural level n: every value with top index <= n lies in
// (-(2n+1), 2n+1).
Rational hull_bound(size_t n) { return Rational(2 * (long long)n + 1); }

long floor_log2(const Rational& d) { return rat_floor_log2(d); }

Rational zomega_embed(const ZVec& z) {
  auto t = z.top_index();
  if (!t || *t == 0) {
    long long k = z.at(0);
    return Rational(k, (k < 0 ? -k : k) + 1);
  }
  size_t n = *t;
  long long k = z.entries.rbegin()->second;
  ZVec rest = z;
  rest.set(n, 0);
  Rational b = hull_bound(n - 1);
  Rational u = (zomega_embed(rest) + b) / (2 * b);  // in (0,1)
  long long m = k < 0 ? -k : k;
  Rational L = b + 2 - pow2(1 - (long)m);
  Rational w = pow2(-(long)m - 2);
  if (k > 0) return L + w * u;
  return -(L + w) + w * u;
}

Rational ord_pow_embed(const OrdinalCNF& a) {
  if (a.is_zero()) return Rational(0);
  size_t d = a.degree();
  unsigned long long c = a.terms.front().second;
  if (d == 0) return 1 - pow2(-(long long)c);
  OrdinalCNF beta = a;
  beta.terms.erase(beta.terms.begin());
  Rational B = 2 - pow2(1 - (long)d);   // base of the degree-d block
  Rational L = pow2(-(long)d);          // its length
  Rational G = ord_pow_embed(beta) / B; // beta < w^d lands in [0, B)
  return B + L * ((1 - pow2(1 - (long long)c)) + pow2(-(long long)c) * G);
}

void omega_sq_split(const OrdinalCNF& a, unsigned long long& m, unsigned long long& k) {
  if (a.degree() > 1) throw WrongOrderError();
  m = k = 0;
  for (auto& t : a.terms) (t.first == 1 ? m : k) = t.second;
}

Rational omega_sq_rev_embed(const OrdinalCNF& a) {
  unsigned long long m, k;
  omega_sq_split(a, m, k);
  if (k == 0) return Rational(-2 * (long long)m);
  return Rational(-(2 * (long long)m + 1)) + pow2(-(long)k);
}

// Bracketing result for the Zomega inverse search, in local coordinates.
struct ZBracket {
  enum class Kind { Pair, Limit, Depth } kind;
  ZVec lower;  // Pair: the glb element (successor is lower + e0)
  long lvl = 0;
  Rational point;  // Limit: the accumulation value
  static ZBracket pair(ZVec z) { return {Kind::Pair, std::move(z), 0, {}}; }
  static ZBracket limit(long l, Rational p) { return {Kind::Limit, {}, l, std::move(p)}; }
  static ZBracket depth() { return {Kind::Depth, {}, 0, {}}; }
};

ZBracket zomega_bracket(const Rational& y, size_t depth) {
  if (depth == 0) return ZBracket::depth();
  if (y > -1 && y < 1) {
    // Level 0: k/(|k|+1) <= y < successor value.
    Integer k = y >= 0 ? rat_floor(y / (1 - y)) : rat_floor(y / (1 + y));
    return ZBracket::pair(ZVec::unit(0, (long long)k));
  }
  if (y == 1 || y == -1) return ZBracket::limit(0, y);
  int s = y > 0 ? 1 : -1;
  Rational u = s > 0 ? y : -y;
  // Level n with 2n-1 < u <= 2n+1.
  Rational half = (u - 1) / 2;
  Integer fl = rat_floor(half);
  size_t n = (size_t)(unsigned long long)(half == Rational(fl) ? fl : fl + 1);
  Rational b = hull_bound(n - 1);
  if (u == b + 2) return ZBracket::limit((long)n, y);
  if (u == b + 1) return ZBracket::limit((long)n, y);  // edge of the first copy
  if (u < b + 1) return ZBracket::limit((long)n - 1, Rational(s) * b);
  // Copy band: largest k >= 1 with L_k <= u.
  Rational delta = b + 2 - u;  // in (0,1)
  long k = -floor_log2(delta);
  while (b + 2 - pow2(-k) <= u) ++k;  // ensure L_{k+1} > u
  while (b + 2 - pow2(1 - k) > u) --k;
  Rational L = b + 2 - pow2(1 - k);
  Rational w = pow2(-k - 2);
  Rational lo = s > 0 ? L : -(L + w);  // band interval in y-coordinates
  Rational yy = s > 0 ? u : y;
  if (yy == lo || yy == lo + w)
    return ZBracket::limit((long)n, yy);
  if (yy < lo || yy > lo + w) {
    // Between copies: report the nearest accumulation point below y.
    return ZBracket::limit((long)n, s > 0 ? lo + w : Rational(-(b + 2 - pow2(-k))));
  }
  Rational inner = (yy - lo) * (2 * b) / w - b;
  ZBracket zb = zomega_bracket(inner, depth - 1);
  switch (zb.kind) {
    case ZBracket::Kind::Pair:
      zb.lower.set(n, s > 0 ? k : -k);
      return zb;
    case ZBracket::Kind::Limit:
      zb.point = lo + w * (zb.point + b) / (2 * b);
      return zb;
    default:
      return zb;
  }
}

// Ordinal glb for x in [0,2); fails only past the safety cap.
bool ord_pow_bracket(Rational x, long cap, OrdinalCNF& out) {
  out = OrdinalCNF::zero();
  for (;;) {
    if (x == 0) return true;
    if (x < 1) {
      // Finite block: 1-2^-c <= x < 1-2^-(c+1).
      Rational s = 1 - x;  // in (0,1]
      long e = floor_log2(s);
      long c = (s == pow2(e)) ? -e : -e - 1;
      if (c > cap) return false;
      out = ord_add(out, OrdinalCNF::finite((unsigned long long)c));
      return true;
    }
    // Degree block: 2-2^(1-d) <= x < 2-2^-d.
    Rational delta = 2 - x;  // in (0,1]
    long d = -floor_log2(delta);
    while (x >= 2 - pow2(-d)) ++d;
    while (d > 1 && x < 2 - pow2(1 - d)) --d;
    if (d > cap) return false;
    Rational B = 2 - pow2(1 - d), L = pow2(-d);
    Rational t = (x - B) / L;  // in [0,1)
    // Leading coefficient: 1-2^(1-c) <= t < 1-2^-c, c >= 1.
    long c = std::max<long>(1, -floor_log2(1 - t));
    while (t >= 1 - pow2(-c)) ++c;
    while (c > 1 && t < 1 - pow2(1 - c)) --c;
    if (c > cap) return false;
    out = ord_add(out, OrdinalCNF::omega_pow((size_t)d, (unsigned long long)c));
    Rational g = (t - (1 - pow2(1 - c))) * pow2(c);  // in [0,1)
    x = g * B;  // remainder lives in the lower-degree blocks
  }
}

}  // namespace

Cmp EmbeddingScheme::cmp(const OrderElement& a, const OrderElement& b) const {
  if (a.order != order || b.order != order) throw WrongOrderError();
  Cmp c;
  switch (order) {
    case OrderTag::Zomega: c = zvec_cmp(a.z, b.z); break;
    case OrderTag::OrdOmegaPow: c = ord_cmp(a.o, b.o); break;
    case OrderTag::OmegaSqReversed: c = ord_cmp(b.o, a.o); break;
    default: c = Cmp::EQ;
  }
  if (c != Cmp::EQ) return c;
  if (a.copy != b.copy) return a.copy < b.copy ? Cmp::LT : Cmp::GT;
  return Cmp::EQ;
}

Rational EmbeddingScheme::base_embed(const OrderElement& e) const {
  if (e.order != order) throw WrongOrderError();
  switch (order) {
    case OrderTag::Zomega: return zomega_embed(e.z);
    case OrderTag::OrdOmegaPow: return ord_pow_embed(e.o);
    default: return omega_sq_rev_embed(e.o);
  }
}

std::optional<OrderElement> EmbeddingScheme::successor(const OrderElement& e) const {
  if (e.order != order) throw WrongOrderError();
  OrderElement s = e;
  s.copy = 0;
  switch (order) {
    case OrderTag::Zomega:
      s.z.set(0, s.z.at(0) + 1);
      return s;
    case OrderTag::OrdOmegaPow:
      s.o = ord_succ(s.o);
      return s;
    default: {
      // Reversed order: the next element upward is the next smaller ordinal.
      unsigned long long m, k;
      omega_sq_split(e.o, m, k);
      if (k == 0) return std::nullopt;
      s.o = ord_add(OrdinalCNF::omega_pow(1, m), OrdinalCNF::finite(k - 1));
      return s;
    }
  }
}

Rational EmbeddingScheme::private_radius(const OrderElement& e) const {
  auto s = successor(e);
  if (!s) return Rational(1, 2);
  return (base_embed(*s) - base_embed(e)) / 2;
}

Rational EmbeddingScheme::xi(const OrderElement& e, unsigned k) const {
  return base_embed(e) + Rational(k) * private_radius(e) / 4;
}

Rational EmbeddingScheme::embed(const OrderElement& e) const { return xi(e, e.copy); }

Located EmbeddingScheme::locate(const Rational& x, size_t max_depth) const {
  // First find the glb element (or an accumulation value), then classify
  // against the anchors in the glb's private interval.
  std::optional<OrderElement> lower;
  switch (order) {
    case OrderTag::Zomega: {
      ZBracket zb = zomega_bracket(x, max_depth + 2);
      if (zb.kind == ZBracket::Kind::Depth) return Located::depth_exceeded();
      if (zb.kind == ZBracket::Kind::Limit)
        return {Located::Kind::BandLimit, {}, 0, {}, {}, zb.lvl, zb.point};
      lower = OrderElement::zv(zb.lower);
      break;
    }
    case OrderTag::OrdOmegaPow: {
      if (x < 0) return {Located::Kind::BandLimit, {}, 0, {}, {}, -1, Rational(0)};
      if (x >= 2) return {Located::Kind::BandLimit, {}, 0, {}, {}, 0, Rational(2)};
      OrdinalCNF a;
      if (!ord_pow_bracket(x, (long)std::max<size_t>(max_depth, 64) * 64, a))
        return Located::depth_exceeded();
      lower = OrderElement::ord(order, a);
      break;
    }
    case OrderTag::OmegaSqReversed: {
      if (x >= 0) {
        lower = OrderElement::ord(order, OrdinalCNF::zero());
        break;
      }
      Integer fl = rat_floor(x);
      long long f = (long long)fl;
      if (f % 2 == 0) {
        // Band [-2m, -2m+1): only the limit ordinal w*m lives here.
        lower = OrderElement::ord(order, OrdinalCNF::omega_pow(1, (unsigned long long)(-f / 2)));
        break;
      }
      unsigned long long m = (unsigned long long)((-f - 1) / 2);
      if (x == Rational(fl))
        return {Located::Kind::BandLimit, {}, 0, {}, {}, (long)m, x};
      // Band (-2m-1, -2m): elements w*m + k, k >= 1, descending in k.
      Rational delta = x - Rational(fl);  // in (0,1)
      // Minimal k with 2^-k <= delta picks the glb element w*m + k.
      long k = -floor_log2(delta);
      while (pow2(-k) > delta) ++k;
      while (k > 1 && pow2(1 - k) <= delta) --k;
      lower = OrderElement::ord(
          order, ord_add(OrdinalCNF::omega_pow(1, m), OrdinalCNF::finite((unsigned long long)k)));
      break;
    }
  }
  Rational base = base_embed(*lower);
  Rational r = private_radius(*lower);
  for (unsigned j = 0; j < arity; ++j)
    if (x == base + Rational(j) * r / 4)
      return {Located::Kind::Anchor, lower, j, {}, {}, 0, {}};
  if (x > base && x < base + r)
    return {Located::Kind::PrivateInterval, lower, 0, x - base, {}, 0, {}};
  auto up = successor(*lower);
  return {Located::Kind::Gap, lower, 0, {}, up, 0, {}};
}

}  // namespace rwb
