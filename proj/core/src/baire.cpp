#include "rwb/baire.hpp"

#include <sstream>

namespace rwb {

namespace {

// Consumes one block of the binary expansion of t in [0,1): counts the
// leading ones and drops them together with the separating zero.
unsigned long long take_block(Rational& t) {
  unsigned long long a = 0;
  while (t * 2 >= 1) {
    t = t * 2 - 1;
    ++a;
  }
  t *= 2;
  return a;
}

// Block decoding of a dyadic rational in [0,1): terminates because the
// expansion does.
std::vector<unsigned long long> decode_dyadic(Rational t) {
  std::vector<unsigned long long> blocks;
  while (t != 0) blocks.push_back(take_block(t));
  return blocks;
}

void strip_trailing_zeros(std::vector<unsigned long long>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

EvalResult exact_result(const Rational& v) {
  EvalResult r;
  r.exact = true;
  r.value = Scalar(v);
  return r;
}

}  // namespace

Integer zigzag_dec(const Integer& n) { return n % 2 != 0 ? Integer((n + 1) / 2) : Integer(-(n / 2)); }

Integer zigzag_enc(const Integer& k) { return k > 0 ? Integer(2 * k - 1) : Integer(-2 * k); }

unsigned long long BairePoint::at(size_t i) const {
  if (i < head.size()) return head[i];
  if (tail == Tail::Zeros) return 0;
  Rational t = r;
  for (size_t s = head.size(); s < i; ++s) take_block(t);
  return take_block(t);
}

BairePoint BairePoint::shifted() const {
  BairePoint y = *this;
  if (!y.head.empty()) {
    y.head.erase(y.head.begin());
    return y;
  }
  if (y.tail == Tail::LexInv) {
    Rational t = y.r;
    take_block(t);
    y.r = t;  // still non-dyadic: finitely many digits were consumed
  }
  return y;
}

BairePoint BairePoint::materialized(size_t k) const {
  BairePoint y = *this;
  while (y.head.size() < k) {
    if (y.tail == Tail::Zeros) {
      y.head.push_back(0);
    } else {
      Rational t = y.r;
      y.head.push_back(take_block(t));
      y.r = t;
    }
  }
  return y;
}

BairePoint BairePoint::eventually_zero_point(std::vector<unsigned long long> prefix) {
  BairePoint x;
  x.head = std::move(prefix);
  strip_trailing_zeros(x.head);
  return x;
}

bool BairePoint::operator==(const BairePoint& o) const {
  if (tail != o.tail) return false;
  if (tail == Tail::Zeros) {
    std::vector<unsigned long long> a = head, b = o.head;
    strip_trailing_zeros(a);
    strip_trailing_zeros(b);
    return a == b;
  }
  return head == o.head && r == o.r;
}

std::string baire_point_to_string(const BairePoint& x) {
  std::ostringstream os;
  if (x.eventually_zero()) {
    std::vector<unsigned long long> h = x.head;
    strip_trailing_zeros(h);
    os << "b:[";
    for (size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << "]";
    return os.str();
  }
  os << "b:gen:";
  if (!x.head.empty()) {
    os << "[";
    for (size_t i = 0; i < x.head.size(); ++i) os << (i ? "," : "") << x.head[i];
    os << "]";
  }
  os << "lexinv(" << rat_to_string(x.r) << "):" << x.depth;
  return os.str();
}

std::optional<BairePoint> baire_point_parse(const std::string& s) {
  auto parse_list = [](const std::string& body) -> std::optional<std::vector<unsigned long long>> {
    std::vector<unsigned long long> out;
    if (body.empty()) return out;
    std::istringstream is(body);
    std::string item;
    while (std::getline(is, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
      out.push_back(std::stoull(item));
    }
    return out;
  };
  if (s.rfind("b:[", 0) == 0 && s.back() == ']') {
    auto list = parse_list(s.substr(3, s.size() - 4));
    if (!list) return std::nullopt;
    return BairePoint::eventually_zero_point(*list);
  }
  if (s.rfind("b:gen:", 0) != 0) return std::nullopt;
  std::string rest = s.substr(6);
  BairePoint x;
  x.tail = BairePoint::Tail::LexInv;
  if (!rest.empty() && rest[0] == '[') {
    size_t close = rest.find(']');
    if (close == std::string::npos) return std::nullopt;
    auto list = parse_list(rest.substr(1, close - 1));
    if (!list) return std::nullopt;
    x.head = *list;
    rest = rest.substr(close + 1);
  }
  if (rest.rfind("lexinv(", 0) != 0) return std::nullopt;
  size_t close = rest.find(')');
  if (close == std::string::npos || close + 1 >= rest.size() || rest[close + 1] != ':')
    return std::nullopt;
  auto q = rat_parse(rest.substr(7, close - 7));
  if (!q || *q <= 0 || *q >= 1 || is_dyadic_rational(*q)) return std::nullopt;
  x.r = *q;
  std::string d = rest.substr(close + 2);
  if (d.empty() || d.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  x.depth = std::stoull(d);
  return x;
}

EvalResult lex_iso(const BairePoint& x, size_t /*depth*/) {
  // The representation keeps the tail as an exact rational, so the coding
  // 0.1^{x(0)} 0 1^{x(1)} 0 ... always sums to an exact value.
  Rational v = 0;
  long pos = 0;
  for (unsigned long long a : x.head) {
    v += pow2(-pos) * (1 - pow2(-(long)a));
    pos += (long)a + 1;
  }
  if (x.tail == BairePoint::Tail::LexInv) v += pow2(-pos) * x.r;
  return exact_result(v);
}

BairePoint lex_iso_inv(const Rational& r, size_t depth) {
  if (r < 0 || r >= 1) throw OutOfRangeError("the block coding decodes values in [0,1)");
  if (is_dyadic_rational(r)) return BairePoint::eventually_zero_point(decode_dyadic(r));
  BairePoint x;
  x.tail = BairePoint::Tail::LexInv;
  x.r = r;
  x.depth = depth;
  return x;
}

EvalResult baire_to_real(const BairePoint& x, size_t depth) {
  EvalResult tail = lex_iso(x.shifted(), depth);
  tail.value = tail.value + Scalar(Rational(zigzag_dec(Integer(x.at(0)))));
  return tail;
}

BairePoint real_to_baire(const Rational& r, size_t depth) {
  Integer n = rat_floor(r);
  Rational f = r - Rational(n);
  unsigned long long h0 = zigzag_enc(n).convert_to<unsigned long long>();
  BairePoint tail = lex_iso_inv(f, depth);
  tail.head.insert(tail.head.begin(), h0);
  if (tail.eventually_zero()) strip_trailing_zeros(tail.head);
  return tail;
}

bool right_continuity_probe(const Rational& r, size_t coords, size_t budget) {
  if (budget < 4) return false;
  BairePoint base = real_to_baire(r);
  std::vector<BairePoint> probes;
  for (size_t k = 1; k <= budget; ++k) probes.push_back(real_to_baire(r + pow2(-(long)k)));
  for (size_t i = 0; i <= coords; ++i) {
    unsigned long long want = base.at(i);
    size_t last_bad = 0;
    for (size_t k = 1; k <= budget; ++k)
      if (probes[k - 1].at(i) != want) last_bad = k;
    if (last_bad + 3 > budget) return false;  // not stable by the budget
  }
  return true;
}

BaireMap BaireMap::drop_prefix(size_t k) {
  BaireMap m;
  m.kind = Kind::DropPrefix;
  m.drop = k;
  return m;
}

BaireMap BaireMap::prepend(std::vector<unsigned long long> p) {
  BaireMap m;
  m.kind = Kind::Prepend;
  m.prefix = std::move(p);
  return m;
}

BaireMap BaireMap::prefix_subst(std::vector<unsigned long long> mt,
                                std::vector<unsigned long long> rp) {
  BaireMap m;
  m.kind = Kind::PrefixSubst;
  m.match = std::move(mt);
  m.replace = std::move(rp);
  return m;
}

BairePoint baire_apply(const BaireMap& g, const BairePoint& x) {
  switch (g.kind) {
    case BaireMap::Kind::Identity:
      return x;
    case BaireMap::Kind::DropPrefix: {
      BairePoint y = x;
      for (size_t i = 0; i < g.drop; ++i) y = y.shifted();
      return y;
    }
    case BaireMap::Kind::Prepend: {
      BairePoint y = x;
      y.head.insert(y.head.begin(), g.prefix.begin(), g.prefix.end());
      if (y.eventually_zero()) strip_trailing_zeros(y.head);
      return y;
    }
    case BaireMap::Kind::PrefixSubst: {
      for (size_t i = 0; i < g.match.size(); ++i)
        if (x.at(i) != g.match[i]) return x;
      BairePoint y = x.materialized(g.match.size());
      y.head.erase(y.head.begin(), y.head.begin() + (long)g.match.size());
      y.head.insert(y.head.begin(), g.replace.begin(), g.replace.end());
      if (y.eventually_zero()) strip_trailing_zeros(y.head);
      return y;
    }
    case BaireMap::Kind::Custom:
      break;
  }
  throw UnsupportedBaireMap("only identity, coordinate shifts, and prefix substitutions apply");
}

TransportedMap transport(const BaireMap& g, SetExpr A, SetExpr B, size_t depth) {
  if (g.kind == BaireMap::Kind::Custom)
    throw UnsupportedBaireMap("the map is not in the coordinatewise catalog");
  return TransportedMap{g, std::move(A), std::move(B), depth};
}

EvalResult transported_eval(const TransportedMap& h, const Rational& x) {
  return baire_to_real(baire_apply(h.g, real_to_baire(x, h.depth)), h.depth);
}

VerificationReport transport_verify(const TransportedMap& h, const IntervalAtom& window,
                                    size_t grid_n, size_t depth) {
  if (!window.lo.finite() || !window.hi.finite() || !window.lo.value.is_rational() ||
      !window.hi.value.is_rational())
    throw UnsupportedError("transport verification needs a bounded rational window");
  Rational lo = window.lo.value.a, hi = window.hi.value.a;
  Rational span = hi - lo;
  VerificationReport rep;
  for (size_t k = 0; k <= grid_n; ++k) {
    Scalar x{lo + Rational(Integer(k), Integer(grid_n == 0 ? 1 : grid_n)) * span};
    if (!window.contains(x)) continue;
    ++rep.samples;
    Verdict a, b;
    try {
      a = member(h.source, x, depth);
    } catch (const DepthExceededError&) {
      a = Verdict::Unknown;
    }
    EvalResult fx = transported_eval(h, x.a);
    try {
      b = member(h.target, fx.value, depth);
    } catch (const DepthExceededError&) {
      b = Verdict::Unknown;
    }
    if (a == Verdict::Unknown || b == Verdict::Unknown) {
      ++rep.inconclusive;
      continue;
    }
    if ((a == Verdict::In) == (b == Verdict::In))
      ++rep.passes;
    else
      rep.failures.push_back(FailureWitness{x, a, fx, b});
  }
  return rep;
}

}  // namespace rwb
