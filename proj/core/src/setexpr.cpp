#include "rwb/setexpr.hpp"

#include <algorithm>

#include "rwb/cantor.hpp"

namespace rwb {

namespace {

Scalar S(const Rational& q) { return Scalar(q); }

// ----- expression constructors ---------------------------------------------

void require_children(const std::vector<SetExpr>& cs, size_t at_least) {
  if (cs.size() < at_least) throw UnsupportedError("combination node needs children");
}

// ----- membership helpers ---------------------------------------------------

// Next canonical ternary digit of t in [0, 1); t is replaced by 3t mod 1.
int next_ternary_digit(Scalar& t) {
  t = Rational(3) * t;
  Integer d = scalar_floor(t);
  t = t - S(Rational(d));
  return static_cast<int>(d);
}

Verdict cantor_set_member(const Scalar& x, size_t depth) {
  if (x.is_rational()) {
    if (x.a < 0 || x.a > 1) return Verdict::Out;
    return in_cantor_set(x.a) ? Verdict::In : Verdict::Out;
  }
  if (x < S(Rational(0)) || x > S(Rational(1))) return Verdict::Out;
  Scalar t = x;
  for (size_t i = 0; i < depth; ++i)
    if (next_ternary_digit(t) == 1) return Verdict::Out;
  return Verdict::Unknown;
}

Verdict min_compact_member(const Scalar& x, const Rational& a, const Rational& b, size_t budget) {
  if (x < S(a) || x > S(b)) return Verdict::Out;
  Rational w = (b - a) / 4;
  Rational u = a + w, v = b - w;
  if (x <= S(u) || x >= S(v)) return Verdict::In;  // thick closed ends
  Rational h = (v - u) / 2;
  Rational c = u + h;
  bool left;
  Scalar delta;
  if (x < S(c)) {
    left = true;
    delta = x - S(u);
  } else if (x == S(c)) {
    return Verdict::Out;  // center point between the two segment families
  } else {
    left = false;
    delta = S(v) - x;
  }
  // Normalized distance into the segment family, in (0, 1); segment k spans
  // [2^-(k+1), 2^-k] and only its closed middle third recurses.
  Scalar dn = delta / S(h);
  long k = -scalar_floor_log2(dn) - 1;
  if (k < 0) k = 0;
  Rational slo = pow2(-(k + 1)), len = pow2(-(k + 1));
  Rational m1 = slo + len / 3, m2 = slo + 2 * len / 3;
  if (dn < S(m1) || dn > S(m2)) return Verdict::Out;
  if (budget == 0) return Verdict::Unknown;
  Rational A = left ? Rational(u + h * m1) : Rational(v - h * m2);
  Rational B = left ? Rational(u + h * m2) : Rational(v - h * m1);
  return min_compact_member(x, A, B, budget - 1);
}

Verdict min_fsigma_member(const Scalar& x, const Rational& u, const Rational& v, size_t budget) {
  if (x <= S(u) || x >= S(v)) return Verdict::Out;
  Rational third = (v - u) / 3;
  Rational m1 = u + third, m2 = v - third;
  if (x >= S(m1) && x <= S(m2)) return min_compact_member(x, m1, m2, budget);
  if (budget == 0) return Verdict::Unknown;
  if (x < S(m1)) return min_fsigma_member(x, u, m1, budget - 1);
  return min_fsigma_member(x, m2, v, budget - 1);
}

// ----- family membership ----------------------------------------------------

struct BlockGeometry {
  OrderElement elem;
  Rational base, radius;
};

// Locates x and returns the glb block when x falls inside a block span
// (anchor, private interval, or gap up to the next base); nullopt with
// certain = true means certified outside all blocks, certain = false means
// the depth budget ran out.
std::optional<BlockGeometry> find_block(const EmbeddingScheme& sch, const Scalar& x,
                                        size_t depth, bool& certain) {
  Located L = x.is_rational() ? sch.locate(x.a, depth) : locate_scalar(sch, x, depth);
  certain = L.kind != Located::Kind::DepthExceeded;
  if (L.kind == Located::Kind::DepthExceeded || L.kind == Located::Kind::BandLimit)
    return std::nullopt;
  BlockGeometry g;
  g.elem = *L.elem;
  g.base = sch.base_embed(g.elem);
  g.radius = sch.private_radius(g.elem);
  return g;
}

Verdict family34_member(const SubsetPattern& a, const Scalar& x, size_t depth) {
  EmbeddingScheme sch = EmbeddingScheme::zomega(4);
  bool certain = true;
  auto g = find_block(sch, x, depth, certain);
  if (!g) return certain ? Verdict::Out : Verdict::Unknown;
  Rational xi1 = g->base + g->radius / 4;
  Rational xi2 = g->base + g->radius / 2;
  Rational xi3 = g->base + 3 * g->radius / 4;
  if (x >= S(g->base) && x < S(xi1)) return Verdict::In;  // [xi0, xi1)
  if (x < S(xi2)) return Verdict::Out;
  if (astar_member(a, g->elem.z))  // compact part collapses to the point xi2
    return x == S(xi2) ? Verdict::In : Verdict::Out;
  return x <= S(xi3) ? Verdict::In : Verdict::Out;  // [xi2, xi3]
}

// True iff o is a pure power w^n with coefficient 1; sets n.
bool is_omega_power(const OrdinalCNF& o, size_t& n) {
  if (o.terms.size() != 1 || o.terms[0].second != 1) return false;
  n = o.terms[0].first;
  return true;
}

Verdict family35_member(const SubsetPattern& b, const Scalar& x, size_t depth) {
  if (x < S(Rational(0)) || x >= S(Rational(2))) return Verdict::Out;
  EmbeddingScheme sch = EmbeddingScheme::ord_pow(2);
  bool certain = true;
  auto g = find_block(sch, x, depth, certain);
  if (!g) return certain ? Verdict::Out : Verdict::Unknown;
  Rational xi1 = g->base + g->radius / 4;
  Rational next = g->base + 2 * g->radius;  // base of the successor block
  if (x < S(xi1)) {
    // Image of f_c^{-1}(Q2 + 1/3) /\ [0,1) under the affine map onto [xi0, xi1).
    Scalar u = (x - S(g->base)) / S(xi1 - g->base);
    return cantor_pre_member(u, Rational(1, 3), depth);
  }
  Scalar u = (x - S(xi1)) / S(next - xi1);
  size_t n = 0;
  bool plus = is_omega_power(g->elem.o, n) && !b.contains(n);
  if (plus && u <= S(Rational(2, 3))) return Verdict::In;  // the [0, 2/3] enlargement
  return cantor_pre_member(u, Rational(0), depth);
}

Verdict anticomplete_member(const SubsetPattern& a, const Scalar& x, size_t depth) {
  EmbeddingScheme sch = EmbeddingScheme::omega_sq_rev(2);
  bool certain = true;
  auto g = find_block(sch, x, depth, certain);
  if (!g) return certain ? Verdict::Out : Verdict::Unknown;
  Rational xi1 = g->base + g->radius / 4;
  Rational c = g->base + g->radius / 2;
  if (x >= S(g->base) && x < S(xi1)) return Verdict::In;
  // Block w*m + k codes the integer k; its compact part is the single point
  // c exactly when k is coded in.
  size_t k = 0;
  if (!g->elem.o.is_zero() && g->elem.o.terms.back().first == 0)
    k = static_cast<size_t>(g->elem.o.terms.back().second);
  if (x == S(c) && a.contains(k)) return Verdict::In;
  return Verdict::Out;
}

Verdict join_member(const SetExpr& s, const Scalar& x, size_t depth);

Verdict named_member(const SetExpr& s, const Scalar& x, size_t depth) {
  switch (s.gen) {
    case Gen::Q:
      return x.is_rational() ? Verdict::In : Verdict::Out;
    case Gen::Q2:
      return (x.is_rational() && is_dyadic_rational(x.a)) ? Verdict::In : Verdict::Out;
    case Gen::CantorSet:
      return cantor_set_member(x, depth);
    case Gen::CantorPre:
      return cantor_pre_member(x, s.offset, depth);
    case Gen::Family34:
      return family34_member(s.pattern, x, depth);
    case Gen::Family35:
      return family35_member(s.pattern, x, depth);
    case Gen::AntiComplete:
      return anticomplete_member(s.pattern, x, depth);
    case Gen::MinCompact:
      return min_compact_member(x, Rational(0), Rational(1), depth);
    case Gen::MinFsigma:
      return min_fsigma_member(x, Rational(0), Rational(1), depth);
  }
  throw UnsupportedError("unknown generator");
}

Verdict join_member(const SetExpr& s, const Scalar& x, size_t depth) {
  Integer fl = scalar_floor(x);
  if (fl < 0 || fl >= Integer(s.children.size())) return Verdict::Out;
  if (x == S(Rational(fl))) return Verdict::Out;
  size_t n = static_cast<size_t>(static_cast<unsigned long long>(fl));
  // Invert t -> n + 1/2 + t/(2(|t|+1)) on (n, n+1).
  Scalar u = x - S(Rational(fl)) - S(Rational(1, 2));
  Scalar two_u = Rational(2) * u;
  Scalar t = scalar_sign(u) >= 0 ? two_u / (S(Rational(1)) - two_u)
                                 : two_u / (S(Rational(1)) + two_u);
  return member(s.children[n], t, depth);
}

// ----- endpoint scans --------------------------------------------------------

bool endpoints_closed(const FiniteUnion& f) {
  for (auto& c : fu_normalize(f)) {
    if (c.is_point()) continue;
    if (c.lo.finite() && !c.lo_closed) return false;
    if (c.hi.finite() && !c.hi_closed) return false;
  }
  return true;
}

bool all_open(const FiniteUnion& f) {
  for (auto& c : fu_normalize(f)) {
    if (c.lo.finite() && c.lo_closed) return false;
    if (c.hi.finite() && c.hi_closed) return false;
  }
  return true;
}

}  // namespace

// ----- constructors ----------------------------------------------------------

SetExpr SetExpr::make_atom(IntervalAtom a) {
  SetExpr e;
  e.kind = Kind::Atom;
  e.atom = std::move(a);
  return e;
}
SetExpr SetExpr::make_union(std::vector<SetExpr> cs) {
  require_children(cs, 1);
  SetExpr e;
  e.kind = Kind::Union;
  e.children = std::move(cs);
  return e;
}
SetExpr SetExpr::make_inter(std::vector<SetExpr> cs) {
  require_children(cs, 1);
  SetExpr e;
  e.kind = Kind::Inter;
  e.children = std::move(cs);
  return e;
}
SetExpr SetExpr::make_compl(SetExpr c) {
  SetExpr e;
  e.kind = Kind::Compl;
  e.children.push_back(std::move(c));
  return e;
}
SetExpr SetExpr::make_join(std::vector<SetExpr> cs) {
  require_children(cs, 1);
  SetExpr e;
  e.kind = Kind::Join;
  e.children = std::move(cs);
  return e;
}
SetExpr SetExpr::named(Gen g) {
  SetExpr e;
  e.kind = Kind::Named;
  e.gen = g;
  return e;
}
SetExpr SetExpr::cantor_pre(Rational off) {
  SetExpr e = named(Gen::CantorPre);
  e.offset = std::move(off);
  return e;
}
SetExpr SetExpr::family34(SubsetPattern a) {
  SetExpr e = named(Gen::Family34);
  e.pattern = std::move(a);
  return e;
}
SetExpr SetExpr::family35(SubsetPattern b) {
  SetExpr e = named(Gen::Family35);
  e.pattern = std::move(b);
  return e;
}
SetExpr SetExpr::anticomplete(SubsetPattern a) {
  SetExpr e = named(Gen::AntiComplete);
  e.pattern = std::move(a);
  return e;
}

// ----- shared helpers --------------------------------------------------------

EmbeddingScheme scheme_for(Gen g) {
  switch (g) {
    case Gen::Family34: return EmbeddingScheme::zomega(4);
    case Gen::Family35: return EmbeddingScheme::ord_pow(2);
    case Gen::AntiComplete: return EmbeddingScheme::omega_sq_rev(2);
    default: throw UnsupportedError("generator is not order-indexed");
  }
}

Located locate_scalar(const EmbeddingScheme& sch, const Scalar& x, size_t depth) {
  if (x.is_rational()) return sch.locate(x.a, depth);
  // A label region of locate() is a convex set with rational endpoints, so
  // once both bracket ends carry the same label the irrational x (never a
  // rational boundary) shares it.
  auto block_group = [](const Located& l) {
    // Anchors and the private interval both sit inside [base, base + r).
    return l.kind == Located::Kind::Gap ? 1 : 0;
  };
  for (unsigned iters = 2; iters <= 4 + 2 * depth && iters <= 200; iters += 2) {
    auto [lo, hi] = scalar_bracket(x, iters);
    Located a = sch.locate(lo, depth);
    Located b = sch.locate(hi, depth);
    if (a.kind == Located::Kind::DepthExceeded || b.kind == Located::Kind::DepthExceeded)
      continue;
    if (a.kind == Located::Kind::BandLimit || b.kind == Located::Kind::BandLimit) {
      if (a.kind == b.kind && a.band_level == b.band_level && a.limit_point == b.limit_point)
        return a;
      continue;
    }
    if (!(*a.elem == *b.elem) || block_group(a) != block_group(b)) continue;
    if (block_group(a) == 1) return a.kind == Located::Kind::Gap ? a : b;
    Located r;
    r.kind = Located::Kind::PrivateInterval;
    r.elem = a.elem;
    return r;
  }
  return Located::depth_exceeded();
}

Verdict cantor_pre_member(const Scalar& x, const Rational& offset, size_t depth) {
  if (x.is_rational())
    return cantor_preimage_member(x.a, offset) ? Verdict::In : Verdict::Out;
  // f_c(m + y) = m + f_c(y) and integer shifts keep dyadicity, so reduce to
  // the fractional part and stream its ternary digits. The first digit 1
  // freezes the value of f_c; if no 1 appears, x lies in a shifted copy of
  // the middle-thirds set where f_c takes an irrational value.
  Integer m = scalar_floor(x);
  Scalar y = x - S(Rational(m));
  Rational acc = 0, p = 1;
  for (size_t i = 0; i < depth; ++i) {
    int d = next_ternary_digit(y);
    p /= 2;
    if (d == 1) return is_dyadic_rational(acc + p - offset) ? Verdict::In : Verdict::Out;
    if (d == 2) acc += p;
  }
  return Verdict::Unknown;
}

// ----- membership ------------------------------------------------------------

Verdict member(const SetExpr& s, const Scalar& x, size_t depth) {
  switch (s.kind) {
    case SetExpr::Kind::Atom:
      return s.atom.contains(x) ? Verdict::In : Verdict::Out;
    case SetExpr::Kind::Union: {
      bool unknown = false;
      for (auto& c : s.children) {
        Verdict v = member(c, x, depth);
        if (v == Verdict::In) return Verdict::In;
        if (v == Verdict::Unknown) unknown = true;
      }
      return unknown ? Verdict::Unknown : Verdict::Out;
    }
    case SetExpr::Kind::Inter: {
      bool unknown = false;
      for (auto& c : s.children) {
        Verdict v = member(c, x, depth);
        if (v == Verdict::Out) return Verdict::Out;
        if (v == Verdict::Unknown) unknown = true;
      }
      return unknown ? Verdict::Unknown : Verdict::In;
    }
    case SetExpr::Kind::Compl: {
      Verdict v = member(s.children[0], x, depth);
      if (v == Verdict::In) return Verdict::Out;
      if (v == Verdict::Out) return Verdict::In;
      return Verdict::Unknown;
    }
    case SetExpr::Kind::Named:
      return named_member(s, x, depth);
    case SetExpr::Kind::Join:
      return join_member(s, x, depth);
  }
  throw UnsupportedError("unknown expression node");
}

// ----- normal forms ----------------------------------------------------------

std::optional<FiniteUnion> as_finite_union(const SetExpr& s) {
  switch (s.kind) {
    case SetExpr::Kind::Atom:
      return FiniteUnion{s.atom};
    case SetExpr::Kind::Union: {
      FiniteUnion acc;
      for (auto& c : s.children) {
        auto f = as_finite_union(c);
        if (!f) return std::nullopt;
        acc = fu_union(acc, *f);
      }
      return acc;
    }
    case SetExpr::Kind::Inter: {
      std::optional<FiniteUnion> acc;
      for (auto& c : s.children) {
        auto f = as_finite_union(c);
        if (!f) return std::nullopt;
        acc = acc ? fu_intersect(*acc, *f) : *f;
      }
      return acc;
    }
    case SetExpr::Kind::Compl: {
      auto f = as_finite_union(s.children[0]);
      if (!f) return std::nullopt;
      return fu_complement(*f);
    }
    default:
      return std::nullopt;
  }
}

FiniteUnion components(const FiniteUnion& f) { return fu_normalize(f); }

// ----- I0/I1 and classification ----------------------------------------------

IFlags check_I(const SetExpr& s) {
  if (auto fu = as_finite_union(s))
    return {endpoints_closed(*fu), endpoints_closed(fu_complement(*fu))};
  if (s.kind == SetExpr::Kind::Compl) {
    IFlags f = check_I(s.children[0]);
    return {f.i1, f.i0};
  }
  if (s.kind == SetExpr::Kind::Named) {
    switch (s.gen) {
      case Gen::Q:
      case Gen::Q2:
      case Gen::CantorPre:
      case Gen::Family35:
      case Gen::MinFsigma:
        // Dense sets with closed nondegenerate components and complements of
        // empty interior on both sides.
        return {true, true};
      case Gen::CantorSet:
      case Gen::MinCompact:
        // Closed sets; the complement has open gap components.
        return {true, false};
      case Gen::Family34:
      case Gen::AntiComplete:
        // Half-open block parts on both sides of the boundary.
        return {false, false};
    }
  }
  throw UnsupportedError("no endpoint-closure rule for this composite");
}

SetClass classify(const SetExpr& s) {
  if (auto fu = as_finite_union(s)) {
    FiniteUnion f = fu_normalize(*fu);
    if (fu_is_empty(f) || fu_is_whole_line(f)) return SetClass::ClopenTrivial;
    if (all_open(f)) return SetClass::Open;
    if (all_open(fu_complement(f))) return SetClass::Closed;
    // Every other finite union is locally closed: removing the finitely
    // many missing endpoints from the closure exhibits it as closed /\ open.
    return SetClass::D2;
  }
  if (s.kind == SetExpr::Kind::Compl) {
    SetClass c = classify(s.children[0]);
    switch (c) {
      case SetClass::Open: return SetClass::Closed;
      case SetClass::Closed: return SetClass::Open;
      case SetClass::ClopenTrivial: return SetClass::ClopenTrivial;
      // The named generators classified "other" all satisfy both endpoint
      // invariants, which rules their complements out of the low classes
      // too.
      case SetClass::Other: return SetClass::Other;
      case SetClass::D2: throw UnsupportedError("no class rule for this complement");
    }
  }
  if (s.kind == SetExpr::Kind::Named) {
    switch (s.gen) {
      case Gen::CantorSet:
      case Gen::MinCompact:
        return SetClass::Closed;
      case Gen::Family34:
      case Gen::AntiComplete:
        // Open block parts intersected with the closed union of block hulls.
        return SetClass::D2;
      case Gen::Q:
      case Gen::Q2:
      case Gen::CantorPre:
      case Gen::Family35:
      case Gen::MinFsigma:
        // Both endpoint invariants hold, which excludes every difference of
        // two open sets for a set that is neither empty nor the line.
        return SetClass::Other;
    }
  }
  throw UnsupportedError("no class rule for this composite");
}

// ----- truncation ------------------------------------------------------------

namespace {

struct WindowQ {
  Rational lo, hi;  // rational hull of the window
};

WindowQ window_hull(const IntervalAtom& w) {
  if (!w.lo.finite() || !w.hi.finite()) throw UnsupportedError("truncation window must be finite");
  if (!w.lo.value.is_rational() || !w.hi.value.is_rational())
    throw UnsupportedError("truncation window must have rational endpoints");
  return {w.lo.value.a, w.hi.value.a};
}

FiniteUnion clip(FiniteUnion f, const IntervalAtom& window) {
  return fu_intersect(std::move(f), FiniteUnion{window});
}

// Consecutive blocks of an embedding scheme whose spans cover the window
// from resolved_lo up to resolved_hi exhaustively (no element lies between
// successive chain members, so the gap between their contents is certified
// empty). Regions of the window outside [resolved_lo, resolved_hi] were not
// resolved within the budget.
struct BlockChain {
  std::vector<BlockGeometry> blocks;
  Rational resolved_lo, resolved_hi;
};

BlockChain blocks_in_window(const EmbeddingScheme& sch, const WindowQ& w, size_t depth,
                            size_t cap) {
  BlockChain out;
  out.resolved_lo = w.lo;
  out.resolved_hi = w.lo;
  std::optional<OrderElement> start;
  Located L = sch.locate(w.lo, depth);
  if (L.kind == Located::Kind::Anchor || L.kind == Located::Kind::PrivateInterval ||
      L.kind == Located::Kind::Gap) {
    start = L.elem;
  } else {
    // The window starts inside a band accumulation; probe points ever closer
    // to the start and keep the closest one that resolves.
    for (size_t j = 1; j <= std::min<size_t>(depth, 40); ++j) {
      Rational p = w.lo + (w.hi - w.lo) * pow2(-(long)j);
      Located lp = sch.locate(p, depth);
      if (lp.kind == Located::Kind::Anchor || lp.kind == Located::Kind::PrivateInterval ||
          lp.kind == Located::Kind::Gap) {
        start = lp.elem;
        out.resolved_lo = p;
      }
    }
    if (!start) return out;
  }
  OrderElement cur = *start;
  out.resolved_hi = out.resolved_lo;
  for (size_t count = 0; count < cap; ++count) {
    BlockGeometry g{cur, sch.base_embed(cur), sch.private_radius(cur)};
    out.blocks.push_back(g);
    auto nxt = sch.successor(cur);
    if (!nxt) {
      // No order successor: the next structure accumulates from above at
      // distance 1 (the reversed omega^2 case), so the unit above the base
      // is certified block-free.
      out.resolved_hi = g.base + 1;
      return out;
    }
    Rational nb = sch.base_embed(*nxt);
    out.resolved_hi = nb;
    if (nb > w.hi) return out;
    cur = *nxt;
  }
  return out;  // cap reached; resolved_hi is the base of the next block
}

void push_interval(FiniteUnion& f, const Rational& lo, const Rational& hi, bool lc, bool hc) {
  Cmp c = scalar_cmp(S(lo), S(hi));
  if (c == Cmp::GT) return;
  if (c == Cmp::EQ && !(lc && hc)) return;
  f.push_back(IntervalAtom(ExtScalar(Scalar(lo)), ExtScalar(Scalar(hi)), lc, hc));
}

void family_truncate(const SetExpr& s, const WindowQ& w, size_t depth, FiniteUnion& inner,
                     FiniteUnion& outer) {
  EmbeddingScheme sch = scheme_for(s.gen);
  BlockChain chain = blocks_in_window(sch, w, depth, 64 + depth);
  if (chain.resolved_lo > w.lo) push_interval(outer, w.lo, chain.resolved_lo, true, true);
  if (chain.resolved_hi < w.hi) push_interval(outer, chain.resolved_hi, w.hi, true, true);
  for (auto& g : chain.blocks) {
    Rational xi1 = g.base + g.radius / 4;
    switch (s.gen) {
      case Gen::Family34: {
        Rational xi2 = g.base + g.radius / 2, xi3 = g.base + 3 * g.radius / 4;
        push_interval(inner, g.base, xi1, true, false);
        push_interval(outer, g.base, xi1, true, false);
        if (astar_member(s.pattern, g.elem.z)) {
          push_interval(inner, xi2, xi2, true, true);
          push_interval(outer, xi2, xi2, true, true);
        } else {
          push_interval(inner, xi2, xi3, true, true);
          push_interval(outer, xi2, xi3, true, true);
        }
        break;
      }
      case Gen::Family35: {
        Rational next = g.base + 2 * g.radius;
        // A-window: dense totally disconnected image; certify one point,
        // the preimage of the value 1/3 (at relative position 1/4).
        push_interval(inner, g.base + (xi1 - g.base) / 4, g.base + (xi1 - g.base) / 4, true, true);
        push_interval(outer, g.base, xi1, true, false);
        // B-window.
        Rational len = next - xi1;
        size_t n = 0;
        bool plus = is_omega_power(g.elem.o, n) && !s.pattern.contains(n);
        if (plus) {
          push_interval(inner, xi1, xi1 + 2 * len / 3, true, true);
        } else {
          push_interval(inner, xi1, xi1, true, true);
          // Plateau of the value 1/2 inside the block.
          push_interval(inner, xi1 + len / 3, xi1 + 2 * len / 3, true, true);
        }
        push_interval(outer, xi1, next, true, false);
        break;
      }
      case Gen::AntiComplete: {
        Rational c = g.base + g.radius / 2;
        push_interval(inner, g.base, xi1, true, false);
        push_interval(outer, g.base, xi1, true, false);
        size_t k = 0;
        if (!g.elem.o.is_zero() && g.elem.o.terms.back().first == 0)
          k = static_cast<size_t>(g.elem.o.terms.back().second);
        if (s.pattern.contains(k)) {
          push_interval(inner, c, c, true, true);
          push_interval(outer, c, c, true, true);
        }
        break;
      }
      default:
        break;
    }
  }
}

void cantor_truncate(const WindowQ& w, size_t depth, FiniteUnion& inner, FiniteUnion& outer) {
  size_t budget = 4096;
  // Emit the depth-d closed thirds intervals meeting the window; when the
  // atom budget runs out a coarser (still valid) interval is emitted, whose
  // endpoints are genuine members too.
  struct Rec {
    static void go(const Rational& a, const Rational& b, size_t d, const WindowQ& w,
                   FiniteUnion& inner, FiniteUnion& outer, size_t& budget) {
      if (b < w.lo || a > w.hi) return;
      if (d == 0 || budget == 0) {
        push_interval(outer, a, b, true, true);
        push_interval(inner, a, a, true, true);
        push_interval(inner, b, b, true, true);
        if (budget) --budget;
        return;
      }
      Rational third = (b - a) / 3;
      go(a, a + third, d - 1, w, inner, outer, budget);
      go(b - third, b, d - 1, w, inner, outer, budget);
    }
  };
  Rec::go(Rational(0), Rational(1), depth, w, inner, outer, budget);
}

void cantor_pre_truncate(const Rational& offset, const WindowQ& w, size_t depth,
                         FiniteUnion& inner, FiniteUnion& outer) {
  push_interval(outer, w.lo, w.hi, true, true);
  // Certified members: exact preimages (plateaus or single points) of the
  // values offset + k/2^m that the monotone f_c attains over the window.
  long m = std::min<size_t>(depth, 14);
  Rational scale = pow2(m);
  Rational vlo = cantor_value(w.lo) - offset, vhi = cantor_value(w.hi) - offset;
  Integer k0 = rat_floor(vlo * scale), k1 = rat_floor(vhi * scale) + 1;
  if (k1 - k0 > 4096) k1 = k0 + 4096;
  for (Integer k = k0; k <= k1; ++k) {
    Rational v = offset + Rational(k) / scale;
    Integer shift = rat_floor(v);
    Rational frac = v - shift;
    auto [p0, p1] = cantor_level_set(frac);
    push_interval(inner, p0 + shift, p1 + shift, true, true);
    if (frac == 0 && shift > 0) {
      // v is also the top value of the unit interval below.
      push_interval(inner, Rational(shift), Rational(shift), true, true);
    }
  }
}

void min_compact_truncate(const Rational& a, const Rational& b, size_t d, FiniteUnion& inner,
                          FiniteUnion& outer, size_t& budget) {
  if (d == 0 || budget == 0) {
    push_interval(outer, a, b, true, true);
    return;
  }
  --budget;
  Rational w4 = (b - a) / 4;
  Rational u = a + w4, v = b - w4;
  Rational h = (v - u) / 2;
  push_interval(inner, a, u, true, true);
  push_interval(inner, v, b, true, true);
  push_interval(outer, a, u, true, true);
  push_interval(outer, v, b, true, true);
  size_t K = d + 2;
  for (size_t k = 0; k < K; ++k) {
    Rational len = h * pow2(-(long)k - 1);
    Rational slo = u + len;  // = u + h*2^-(k+1)
    min_compact_truncate(slo + len / 3, slo + 2 * len / 3, d - 1, inner, outer, budget);
    Rational rlo = v - h * pow2(-(long)k);
    min_compact_truncate(rlo + len / 3, rlo + 2 * len / 3, d - 1, inner, outer, budget);
  }
  // Unexpanded accumulation tails near u and v.
  push_interval(outer, u, u + h * pow2(-(long)K), true, true);
  push_interval(outer, v - h * pow2(-(long)K), v, true, true);
}

void min_fsigma_truncate(const Rational& u, const Rational& v, size_t d, FiniteUnion& inner,
                         FiniteUnion& outer, size_t& budget) {
  if (d == 0 || budget == 0) {
    push_interval(outer, u, v, false, false);
    return;
  }
  Rational third = (v - u) / 3;
  Rational m1 = u + third, m2 = v - third;
  min_compact_truncate(m1, m2, d, inner, outer, budget);
  min_fsigma_truncate(u, m1, d - 1, inner, outer, budget);
  min_fsigma_truncate(m2, v, d - 1, inner, outer, budget);
}

}  // namespace

Truncation truncate(const SetExpr& s, const IntervalAtom& window, size_t depth) {
  Truncation t;
  t.window = window;
  t.depth = depth;
  if (auto fu = as_finite_union(s)) {
    t.inner = clip(*fu, window);
    t.outer = t.inner;
    return t;
  }
  switch (s.kind) {
    case SetExpr::Kind::Union: {
      for (auto& c : s.children) {
        Truncation ct = truncate(c, window, depth);
        t.inner = fu_union(t.inner, ct.inner);
        t.outer = fu_union(t.outer, ct.outer);
      }
      return t;
    }
    case SetExpr::Kind::Inter: {
      bool first = true;
      for (auto& c : s.children) {
        Truncation ct = truncate(c, window, depth);
        t.inner = first ? ct.inner : fu_intersect(t.inner, ct.inner);
        t.outer = first ? ct.outer : fu_intersect(t.outer, ct.outer);
        first = false;
      }
      return t;
    }
    case SetExpr::Kind::Compl: {
      Truncation ct = truncate(s.children[0], window, depth);
      t.inner = clip(fu_complement(ct.outer), window);
      t.outer = clip(fu_complement(ct.inner), window);
      return t;
    }
    case SetExpr::Kind::Join: {
      t.inner = {};
      t.outer = clip(FiniteUnion{IntervalAtom(
                         ExtScalar(Rational(0)), ExtScalar(Rational((long)s.children.size())),
                         false, false)},
                     window);
      return t;
    }
    case SetExpr::Kind::Named:
      break;
    default:
      throw UnsupportedError("cannot truncate this expression");
  }
  WindowQ w = window_hull(window);
  FiniteUnion inner, outer;
  switch (s.gen) {
    case Gen::Q:
    case Gen::Q2: {
      push_interval(outer, w.lo, w.hi, true, true);
      // Certified member points on a uniform grid (denominators are powers
      // of two, so the points are dyadic and rational alike).
      long m = std::min<size_t>(depth, 10);
      Rational step = (w.hi - w.lo) * pow2(-m);
      if (step > 0)
        for (Rational p = w.lo; p <= w.hi; p += step)
          if (s.gen == Gen::Q || is_dyadic_rational(p)) push_interval(inner, p, p, true, true);
      break;
    }
    case Gen::CantorSet:
      cantor_truncate(w, depth, inner, outer);
      break;
    case Gen::CantorPre:
      cantor_pre_truncate(s.offset, w, depth, inner, outer);
      break;
    case Gen::Family34:
    case Gen::Family35:
    case Gen::AntiComplete:
      family_truncate(s, w, depth, inner, outer);
      break;
    case Gen::MinCompact: {
      size_t budget = 20000;
      min_compact_truncate(Rational(0), Rational(1), std::min<size_t>(depth, 4), inner, outer,
                           budget);
      break;
    }
    case Gen::MinFsigma: {
      size_t budget = 20000;
      min_fsigma_truncate(Rational(0), Rational(1), std::min<size_t>(depth, 4), inner, outer,
                          budget);
      break;
    }
  }
  t.inner = clip(std::move(inner), window);
  t.outer = clip(std::move(outer), window);
  return t;
}

LStructureView extract_structure(const SetExpr& s, const IntervalAtom& window, size_t depth) {
  if (s.kind != SetExpr::Kind::Named) throw UnsupportedError("structure view needs a family");
  EmbeddingScheme sch = scheme_for(s.gen);  // validates the generator
  WindowQ w = window_hull(window);
  BlockChain chain = blocks_in_window(sch, w, depth, 64 + depth);
  if (chain.blocks.empty()) throw DepthExceededError("no block resolved inside the window");
  LStructureView view;
  for (auto& g : chain.blocks) {
    if (g.base + g.radius < w.lo || g.base > w.hi) continue;
    LBlock b;
    b.elem = g.elem;
    b.anchor0 = g.base;
    b.anchor1 = g.base + g.radius / 4;
    b.half_open = IntervalAtom(ExtScalar(Scalar(b.anchor0)), ExtScalar(Scalar(b.anchor1)), true, false);
    switch (s.gen) {
      case Gen::Family34:
        b.compact_pattern = astar_member(s.pattern, g.elem.z) ? LBlock::Pattern::Singleton
                                                              : LBlock::Pattern::Interval;
        break;
      case Gen::Family35: {
        size_t n = 0;
        bool plus = is_omega_power(g.elem.o, n) && !s.pattern.contains(n);
        b.compact_pattern = plus ? LBlock::Pattern::Interval : LBlock::Pattern::Empty;
        break;
      }
      case Gen::AntiComplete: {
        size_t k = 0;
        if (!g.elem.o.is_zero() && g.elem.o.terms.back().first == 0)
          k = static_cast<size_t>(g.elem.o.terms.back().second);
        b.compact_pattern =
            s.pattern.contains(k) ? LBlock::Pattern::Singleton : LBlock::Pattern::Empty;
        break;
      }
      default:
        break;
    }
    view.blocks.push_back(std::move(b));
  }
  return view;
}

std::string set_class_name(SetClass c) {
  switch (c) {
    case SetClass::Open: return "open";
    case SetClass::Closed: return "closed";
    case SetClass::ClopenTrivial: return "clopen-trivial";
    case SetClass::D2: return "d2";
    case SetClass::Other: return "other";
  }
  return "?";
}

}  // namespace rwb
