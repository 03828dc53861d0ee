#include "rwb/pwmap.hpp"

#include <algorithm>
#include <sstream>

#include "rwb/cantor.hpp"

namespace rwb {

namespace {

Rational rat_abs(const Rational& q) { return rat_sign(q) < 0 ? -q : q; }

std::string despace(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

std::string scalar_token(const Scalar& v) { return despace(scalar_to_string(v)); }
std::string ext_token(const ExtScalar& v) { return despace(ext_to_string(v)); }

// The cell [b_{i-1}, b_i) as an interval atom.
IntervalAtom cell_atom(const PiecewiseMap& f, size_t i) {
  ExtScalar lo = i == 0 ? ExtScalar::minus_inf() : ExtScalar(f.breakpoints[i - 1]);
  ExtScalar hi = i == f.breakpoints.size() ? ExtScalar::plus_inf() : ExtScalar(f.breakpoints[i]);
  return IntervalAtom(lo, hi, lo.finite(), false);
}

// f_c^{-1}({v}) for arbitrary rational v, using f_c(t + n) = f_c(t) + n.
std::pair<Rational, Rational> level_set(const Rational& v) {
  Integer n = rat_floor(v);
  auto [p0, p1] = cantor_level_set(v - Rational(n));
  return {p0 + Rational(n), p1 + Rational(n)};
}

// Image of an atom under y -> (y - i)/s, with endpoint swap when s < 0.
IntervalAtom affine_pre_atom(const IntervalAtom& a, const Scalar& s, const Scalar& ic) {
  auto mapped = [&](const ExtScalar& e) -> ExtScalar {
    if (e.finite()) return ExtScalar((e.value - ic) / s);
    bool plus = e.tag == ExtScalar::Tag::PlusInf;
    if (scalar_sign(s) < 0) plus = !plus;
    return plus ? ExtScalar::plus_inf() : ExtScalar::minus_inf();
  };
  ExtScalar lo = mapped(a.lo), hi = mapped(a.hi);
  bool lc = a.lo_closed, hc = a.hi_closed;
  if (scalar_sign(s) < 0) {
    std::swap(lo, hi);
    std::swap(lc, hc);
  }
  return IntervalAtom(lo, hi, lc, hc);
}

EvalResult exact_result(Scalar v) {
  EvalResult r;
  r.exact = true;
  r.value = std::move(v);
  return r;
}

// shift + 1/2 + x/(2(|x|+1)), exactly.
Scalar squash_value(const Scalar& shift, const Scalar& x) {
  Scalar ax = scalar_sign(x) < 0 ? Scalar(Rational(0)) - x : x;
  return shift + Scalar(Rational(1, 2)) + x / (Rational(2) * (ax + Scalar(Rational(1))));
}

// Inverse of squash_value on (shift, shift+1): u = y - shift - 1/2 in
// (-1/2, 1/2) pulls back to 2u/(1 -+ 2u) depending on the sign.
Scalar squash_inverse(const Scalar& shift, const Scalar& y) {
  Scalar u = y - shift - Scalar(Rational(1, 2));
  Scalar two_u = Rational(2) * u;
  return scalar_sign(u) >= 0 ? two_u / (Scalar(Rational(1)) - two_u)
                             : two_u / (Scalar(Rational(1)) + two_u);
}

EvalResult piece_eval(const Piece& p, const Scalar& x, const Rational& eps);

// Evaluates g(f(x)) through a composition handle, refining the inner
// enclosure until the outer enclosure is certified and narrow enough.
EvalResult deferred_eval(const Piece& p, const Scalar& x, const Rational& eps) {
  if (!p.comp) throw UnsupportedError("deferred piece without a composition handle");
  const PiecewiseMap& f = p.comp->first;
  const PiecewiseMap& g = p.comp->second;
  Rational ieps = eps;
  for (int tries = 0; tries < 64; ++tries) {
    EvalResult inner = eval(f, x, ieps);
    if (inner.exact) return eval(g, inner.value, eps);
    size_t jl = g.cell_of(inner.lo), jh = g.cell_of(inner.hi);
    if (jl == jh && g.pieces[jl].kind != Piece::Kind::Deferred) {
      // Every single piece is monotone on its cell, so the endpoint
      // enclosures hull the whole image of the inner enclosure.
      EvalResult a = piece_eval(g.pieces[jl], inner.lo, eps / 4);
      EvalResult b = piece_eval(g.pieces[jl], inner.hi, eps / 4);
      Scalar alo = a.exact ? a.value : a.lo, ahi = a.exact ? a.value : a.hi;
      Scalar blo = b.exact ? b.value : b.lo, bhi = b.exact ? b.value : b.hi;
      Scalar lo = alo < blo ? alo : blo;
      Scalar hi = ahi > bhi ? ahi : bhi;
      if (hi - lo <= Scalar(eps)) {
        EvalResult r;
        r.exact = false;
        r.lo = std::move(lo);
        r.hi = std::move(hi);
        return r;
      }
    }
    ieps /= 16;
  }
  throw UnresolvableRangeError("deferred evaluation did not converge");
}

EvalResult piece_eval(const Piece& p, const Scalar& x, const Rational& eps) {
  switch (p.kind) {
    case Piece::Kind::Constant:
      return exact_result(p.c);
    case Piece::Kind::Affine:
      return exact_result(p.slope * x + p.intercept);
    case Piece::Kind::Squash:
      return exact_result(squash_value(p.c, x));
    case Piece::Kind::Deferred:
      return deferred_eval(p, x, eps);
    case Piece::Kind::CantorAffine:
      break;
  }
  Scalar t = p.beta * x + Scalar(p.gamma);
  if (t.is_rational()) return exact_result(Scalar(p.alpha * cantor_value(t.a) + p.delta));
  // Irrational argument: stream ternary digits of the fractional part. A
  // digit 1 freezes the value exactly; otherwise each digit halves the
  // enclosing dyadic interval.
  Integer n = scalar_floor(t);
  Scalar u = t - Scalar(Rational(n));
  Rational acc(n);
  Rational aabs = rat_abs(p.alpha);
  long m = 0;
  for (;;) {
    ++m;
    u = Rational(3) * u;
    Integer d = scalar_floor(u);
    u = u - Scalar(Rational(d));
    if (d == 1) return exact_result(Scalar(p.alpha * (acc + pow2(-m)) + p.delta));
    acc += Rational(d) / 2 * pow2(-m);
    if (aabs * pow2(-m) <= eps) break;
  }
  Rational vlo = p.alpha * acc + p.delta;
  Rational vhi = p.alpha * (acc + pow2(-m)) + p.delta;
  if (vhi < vlo) std::swap(vlo, vhi);
  EvalResult r;
  r.exact = false;
  r.lo = Scalar(vlo);
  r.hi = Scalar(vhi);
  return r;
}

// Exact value of a piece at x when one exists without approximation.
std::optional<Scalar> piece_exact(const Piece& p, const Scalar& x) {
  switch (p.kind) {
    case Piece::Kind::Constant:
      return p.c;
    case Piece::Kind::Affine:
      return p.slope * x + p.intercept;
    case Piece::Kind::CantorAffine: {
      Scalar t = p.beta * x + Scalar(p.gamma);
      if (!t.is_rational()) return std::nullopt;
      return Scalar(p.alpha * cantor_value(t.a) + p.delta);
    }
    case Piece::Kind::Squash:
      return squash_value(p.c, x);
    case Piece::Kind::Deferred:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Piece Piece::constant(Scalar v) {
  Piece p;
  p.kind = Kind::Constant;
  p.c = std::move(v);
  return p;
}

Piece Piece::affine(Scalar s, Scalar i) {
  if (scalar_sign(s) == 0) throw std::invalid_argument("affine piece needs a nonzero slope");
  Piece p;
  p.kind = Kind::Affine;
  p.slope = std::move(s);
  p.intercept = std::move(i);
  return p;
}

Piece Piece::cantor_affine(Rational a, Rational b, Rational g, Rational d) {
  if (a == 0 || b == 0) throw std::invalid_argument("cantor piece needs nonzero alpha and beta");
  Piece p;
  p.kind = Kind::CantorAffine;
  p.alpha = std::move(a);
  p.beta = std::move(b);
  p.gamma = std::move(g);
  p.delta = std::move(d);
  return p;
}

Piece Piece::squash(Scalar shift) {
  Piece p;
  p.kind = Kind::Squash;
  p.c = std::move(shift);
  return p;
}

Piece Piece::deferred(long id) {
  Piece p;
  p.kind = Kind::Deferred;
  p.deferred_id = id;
  return p;
}

size_t PiecewiseMap::cell_of(const Scalar& x) const {
  size_t i = 0;
  while (i < breakpoints.size() && x >= breakpoints[i]) ++i;
  return i;
}

PiecewiseMap PiecewiseMap::constant(Scalar v) {
  PiecewiseMap f;
  f.pieces.push_back(Piece::constant(std::move(v)));
  return f;
}

PiecewiseMap PiecewiseMap::identity() { return affine(Scalar(Rational(1)), Scalar(Rational(0))); }

PiecewiseMap PiecewiseMap::affine(Scalar s, Scalar i) {
  PiecewiseMap f;
  f.pieces.push_back(Piece::affine(std::move(s), std::move(i)));
  return f;
}

EvalResult eval(const PiecewiseMap& f, const Scalar& x, const Rational& eps) {
  if (f.partial && !fu_contains(f.domain, x)) throw OutsideDomainError();
  return piece_eval(f.pieces[f.cell_of(x)], x, eps);
}

PiecewiseMap compose(const PiecewiseMap& g, const PiecewiseMap& f) {
  // Refine f's cells so that every affine piece maps a refined cell into a
  // single cell of g: add the preimages of g's breakpoints that fall
  // strictly inside an affine cell.
  std::vector<Scalar> bps = f.breakpoints;
  for (size_t i = 0; i < f.pieces.size(); ++i) {
    const Piece& p = f.pieces[i];
    if (p.kind != Piece::Kind::Affine) continue;
    IntervalAtom cell = cell_atom(f, i);
    for (const Scalar& gb : g.breakpoints) {
      Scalar x0 = (gb - p.intercept) / p.slope;
      if (cell.contains(x0) && ExtScalar(x0) != cell.lo) bps.push_back(x0);
    }
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  auto handle = std::make_shared<const std::pair<PiecewiseMap, PiecewiseMap>>(f, g);
  long next_id = 0;
  auto deferred_piece = [&] {
    Piece d = Piece::deferred(next_id++);
    d.comp = handle;
    return d;
  };

  PiecewiseMap h;
  h.breakpoints = bps;
  for (size_t j = 0; j <= bps.size(); ++j) {
    // A representative point of the (open interior of the) cell.
    Scalar rep;
    if (j == 0 && bps.empty())
      rep = Scalar(Rational(0));
    else if (j == 0)
      rep = bps[0] - Scalar(Rational(1));
    else if (j == bps.size())
      rep = bps[j - 1] + Scalar(Rational(1));
    else
      rep = Rational(1, 2) * (bps[j - 1] + bps[j]);
    const Piece& fp = f.pieces[f.cell_of(rep)];

    switch (fp.kind) {
      case Piece::Kind::Constant: {
        const Piece& gp = g.pieces[g.cell_of(fp.c)];
        if (auto v = piece_exact(gp, fp.c))
          h.pieces.push_back(Piece::constant(*v));
        else
          h.pieces.push_back(deferred_piece());
        break;
      }
      case Piece::Kind::Affine: {
        // After the refinement above the affine image of the cell interior
        // lies in one cell of g; when g is continuous the chosen formula is
        // also valid at the cell's left endpoint.
        const Piece& gp = g.pieces[g.cell_of(fp.slope * rep + fp.intercept)];
        if (gp.kind == Piece::Kind::Constant) {
          h.pieces.push_back(Piece::constant(gp.c));
        } else if (gp.kind == Piece::Kind::Affine) {
          h.pieces.push_back(Piece::affine(gp.slope * fp.slope,
                                           gp.slope * fp.intercept + gp.intercept));
        } else if (gp.kind == Piece::Kind::CantorAffine && fp.slope.is_rational() &&
                   fp.intercept.is_rational()) {
          h.pieces.push_back(Piece::cantor_affine(gp.alpha, gp.beta * fp.slope.a,
                                                  gp.beta * fp.intercept.a + gp.gamma,
                                                  gp.delta));
        } else {
          h.pieces.push_back(deferred_piece());
        }
        break;
      }
      case Piece::Kind::CantorAffine: {
        // Fold only when the whole image of the cell is certified to lie in
        // one cell of g (the piece is monotone, so endpoint enclosures hull
        // the image); otherwise defer.
        IntervalAtom cell = cell_atom(f, f.cell_of(rep));
        std::optional<Piece> folded;
        if (cell.lo.finite() && cell.hi.finite()) {
          EvalResult a = piece_eval(fp, cell.lo.value, Rational(1, 1048576));
          EvalResult b = piece_eval(fp, cell.hi.value, Rational(1, 1048576));
          Scalar alo = a.exact ? a.value : a.lo, ahi = a.exact ? a.value : a.hi;
          Scalar blo = b.exact ? b.value : b.lo, bhi = b.exact ? b.value : b.hi;
          Scalar lo = alo < blo ? alo : blo;
          Scalar hi = ahi > bhi ? ahi : bhi;
          size_t jl = g.cell_of(lo), jh = g.cell_of(hi);
          if (jl == jh) {
            const Piece& gp = g.pieces[jl];
            if (gp.kind == Piece::Kind::Constant) {
              folded = Piece::constant(gp.c);
            } else if (gp.kind == Piece::Kind::Affine && gp.slope.is_rational() &&
                       gp.intercept.is_rational()) {
              folded = Piece::cantor_affine(gp.slope.a * fp.alpha, fp.beta, fp.gamma,
                                            gp.slope.a * fp.delta + gp.intercept.a);
            }
          }
        }
        h.pieces.push_back(folded ? *folded : deferred_piece());
        break;
      }
      case Piece::Kind::Squash: {
        // The image of the cell is an interval inside (c, c+1) with exact
        // endpoints; fold when it fits in one cell of g.
        IntervalAtom cell = cell_atom(f, f.cell_of(rep));
        Scalar vlo = cell.lo.finite() ? squash_value(fp.c, cell.lo.value) : fp.c;
        Scalar vhi = cell.hi.finite() ? squash_value(fp.c, cell.hi.value)
                                      : fp.c + Scalar(Rational(1));
        size_t jl = g.cell_of(vlo), jh = g.cell_of(vhi);
        // The supremum vhi is not attained (cells are right-open), so a
        // breakpoint of g exactly at vhi still leaves the image in cell jl.
        bool one_cell = jl == jh || (jh == jl + 1 && g.breakpoints[jl] == vhi);
        std::optional<Piece> folded;
        if (one_cell) {
          const Piece& gp = g.pieces[jl];
          if (gp.kind == Piece::Kind::Constant)
            folded = Piece::constant(gp.c);
          else if (gp.kind == Piece::Kind::Affine && gp.slope == Scalar(Rational(1)))
            folded = Piece::squash(fp.c + gp.intercept);
        }
        h.pieces.push_back(folded ? *folded : deferred_piece());
        break;
      }
      case Piece::Kind::Deferred:
        h.pieces.push_back(deferred_piece());
        break;
    }
  }

  if (f.partial || g.partial) {
    FiniteUnion dom = f.partial ? f.domain : FiniteUnion{IntervalAtom::whole_line()};
    if (g.partial) {
      try {
        dom = fu_intersect(dom, preimage(f, g.domain));
      } catch (const UnsupportedError& e) {
        throw UnresolvableRangeError(std::string("cannot restrict to the inner preimage: ") + e.what());
      }
    }
    h.partial = true;
    h.domain = std::move(dom);
  }
  return h;
}

FiniteUnion preimage(const PiecewiseMap& f, const FiniteUnion& F) {
  FiniteUnion target = fu_normalize(F);
  FiniteUnion out;
  for (size_t i = 0; i < f.pieces.size(); ++i) {
    const Piece& p = f.pieces[i];
    IntervalAtom cell = cell_atom(f, i);
    switch (p.kind) {
      case Piece::Kind::Constant:
        if (fu_contains(target, p.c)) out.push_back(cell);
        break;
      case Piece::Kind::Affine:
        for (const IntervalAtom& a : target)
          if (auto z = atom_intersect(affine_pre_atom(a, p.slope, p.intercept), cell))
            out.push_back(*z);
        break;
      case Piece::Kind::CantorAffine: {
        for (const IntervalAtom& a : target) {
          // Pull the atom back through y = alpha*v + delta, then through the
          // Cantor function (weakly increasing: a closed lower endpoint u
          // pulls back to the first point of its level set, an open one to
          // the last, and dually above), then through t = beta*x + gamma.
          IntervalAtom G = affine_pre_atom(a, Scalar(p.alpha), Scalar(p.delta));
          ExtScalar tlo = ExtScalar::minus_inf(), thi = ExtScalar::plus_inf();
          bool tlc = false, thc = false;
          if (G.lo.finite()) {
            if (!G.lo.value.is_rational())
              throw UnsupportedError("cantor preimage of an irrational endpoint");
            auto [p0, p1] = level_set(G.lo.value.a);
            tlo = ExtScalar(Rational(G.lo_closed ? p0 : p1));
            tlc = G.lo_closed;
          }
          if (G.hi.finite()) {
            if (!G.hi.value.is_rational())
              throw UnsupportedError("cantor preimage of an irrational endpoint");
            auto [p0, p1] = level_set(G.hi.value.a);
            thi = ExtScalar(Rational(G.hi_closed ? p1 : p0));
            thc = G.hi_closed;
          }
          Cmp c = ext_cmp(tlo, thi);
          if (c == Cmp::GT || (c == Cmp::EQ && !(tlc && thc))) continue;
          IntervalAtom tatom(tlo, thi, tlc, thc);
          IntervalAtom xatom = affine_pre_atom(tatom, Scalar(p.beta), Scalar(p.gamma));
          if (auto z = atom_intersect(xatom, cell)) out.push_back(*z);
        }
        break;
      }
      case Piece::Kind::Squash: {
        // Strictly increasing onto (c, c+1): clip the atom to the image and
        // pull the finite endpoints back through the exact inverse.
        Scalar top = p.c + Scalar(Rational(1));
        for (const IntervalAtom& a : target) {
          ExtScalar tlo = ExtScalar::minus_inf(), thi = ExtScalar::plus_inf();
          bool tlc = false, thc = false;
          if (a.lo.finite() && a.lo.value >= top) continue;
          if (a.hi.finite() && a.hi.value <= p.c) continue;
          if (a.lo.finite() && a.lo.value > p.c) {
            tlo = ExtScalar(squash_inverse(p.c, a.lo.value));
            tlc = a.lo_closed;
          }
          if (a.hi.finite() && a.hi.value < top) {
            thi = ExtScalar(squash_inverse(p.c, a.hi.value));
            thc = a.hi_closed;
          }
          Cmp c = ext_cmp(tlo, thi);
          if (c == Cmp::GT || (c == Cmp::EQ && !(tlc && thc))) continue;
          if (auto z = atom_intersect(IntervalAtom(tlo, thi, tlc, thc), cell)) out.push_back(*z);
        }
        break;
      }
      case Piece::Kind::Deferred:
        throw UnsupportedError("preimage through a deferred piece");
    }
  }
  if (f.partial) return fu_intersect(fu_normalize(std::move(out)), f.domain);
  return fu_normalize(std::move(out));
}

bool check_continuity(const PiecewiseMap& f) {
  for (size_t i = 0; i < f.breakpoints.size(); ++i) {
    const Scalar& b = f.breakpoints[i];
    auto l = piece_exact(f.pieces[i], b);
    auto r = piece_exact(f.pieces[i + 1], b);
    if (l && r) {
      if (*l != *r) return false;
      continue;
    }
    // Inexact side(s): certify a discontinuity only when tight enclosures
    // are disjoint.
    Rational eps = pow2(-80);
    auto enclose = [&](const Piece& p) {
      EvalResult e = piece_eval(p, b, eps);
      return e.exact ? std::pair<Scalar, Scalar>{e.value, e.value}
                     : std::pair<Scalar, Scalar>{e.lo, e.hi};
    };
    auto [llo, lhi] = enclose(f.pieces[i]);
    auto [rlo, rhi] = enclose(f.pieces[i + 1]);
    if (lhi < rlo || rhi < llo) return false;
  }
  return true;
}

std::pair<Scalar, Scalar> image_hull(const PiecewiseMap& f, const IntervalAtom& window) {
  std::optional<Scalar> lo, hi;
  auto absorb = [&](const Scalar& l, const Scalar& h) {
    if (!lo || l < *lo) lo = l;
    if (!hi || h > *hi) hi = h;
  };
  for (size_t i = 0; i < f.pieces.size(); ++i) {
    auto part = atom_intersect(cell_atom(f, i), window);
    if (!part) continue;
    const Piece& p = f.pieces[i];
    switch (p.kind) {
      case Piece::Kind::Constant:
        absorb(p.c, p.c);
        break;
      case Piece::Kind::Affine: {
        if (!part->lo.finite() || !part->hi.finite())
          throw UnresolvableRangeError("unbounded affine image");
        Scalar v1 = p.slope * part->lo.value + p.intercept;
        Scalar v2 = p.slope * part->hi.value + p.intercept;
        if (v2 < v1) std::swap(v1, v2);
        absorb(v1, v2);
        break;
      }
      case Piece::Kind::CantorAffine: {
        if (!part->lo.finite() || !part->hi.finite())
          throw UnresolvableRangeError("unbounded cantor-affine image");
        Rational eps = pow2(-60);
        for (const ExtScalar* e : {&part->lo, &part->hi}) {
          EvalResult r = piece_eval(p, e->value, eps);
          absorb(r.exact ? r.value : r.lo, r.exact ? r.value : r.hi);
        }
        break;
      }
      case Piece::Kind::Squash: {
        // Bounded into (c, c+1); infinite window ends close off to the
        // endpoints of the hull.
        Scalar v1 = part->lo.finite() ? squash_value(p.c, part->lo.value) : p.c;
        Scalar v2 = part->hi.finite() ? squash_value(p.c, part->hi.value)
                                      : p.c + Scalar(Rational(1));
        absorb(v1, v2);
        break;
      }
      case Piece::Kind::Deferred:
        throw UnsupportedError("image hull of a deferred piece");
    }
  }
  if (!lo) throw UnresolvableRangeError("empty window");
  return {*lo, *hi};
}

std::string map_to_string(const PiecewiseMap& f) {
  std::ostringstream os;
  os << "MAP " << (f.partial ? "partial" : "total") << "\n";
  for (size_t i = 0; i < f.pieces.size(); ++i) {
    IntervalAtom cell = cell_atom(f, i);
    os << "BP " << ext_token(cell.lo) << " " << ext_token(cell.hi) << "\n";
    const Piece& p = f.pieces[i];
    switch (p.kind) {
      case Piece::Kind::Constant:
        os << "PIECE const " << scalar_token(p.c) << "\n";
        break;
      case Piece::Kind::Affine:
        os << "PIECE affine " << scalar_token(p.slope) << " " << scalar_token(p.intercept) << "\n";
        break;
      case Piece::Kind::CantorAffine:
        os << "PIECE cantor " << rat_to_string(p.alpha) << " " << rat_to_string(p.beta) << " "
           << rat_to_string(p.gamma) << " " << rat_to_string(p.delta) << "\n";
        break;
      case Piece::Kind::Squash:
        os << "PIECE squash " << scalar_token(p.c) << "\n";
        break;
      case Piece::Kind::Deferred:
        os << "PIECE deferred " << p.deferred_id << "\n";
        break;
    }
  }
  if (f.partial)
    for (const IntervalAtom& a : fu_normalize(f.domain))
      os << "DOM " << ext_token(a.lo) << " " << ext_token(a.hi) << " "
         << (a.lo_closed ? "closed" : "open") << " " << (a.hi_closed ? "closed" : "open") << "\n";
  return os.str();
}

std::optional<PiecewiseMap> map_parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  PiecewiseMap f;
  bool have_header = false;
  std::optional<ExtScalar> prev_hi;
  bool awaiting_piece = false;
  FiniteUnion dom;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "MAP") {
      std::string mode;
      if (!(ls >> mode) || have_header) return std::nullopt;
      if (mode == "partial")
        f.partial = true;
      else if (mode != "total")
        return std::nullopt;
      have_header = true;
    } else if (tag == "BP") {
      std::string slo, shi;
      if (!have_header || awaiting_piece || !(ls >> slo >> shi)) return std::nullopt;
      auto lo = ext_parse(slo), hi = ext_parse(shi);
      if (!lo || !hi) return std::nullopt;
      if (prev_hi) {
        if (*lo != *prev_hi || !lo->finite()) return std::nullopt;
        f.breakpoints.push_back(lo->value);
      } else if (lo->tag != ExtScalar::Tag::MinusInf) {
        return std::nullopt;
      }
      if (ext_cmp(*lo, *hi) != Cmp::LT) return std::nullopt;
      prev_hi = hi;
      awaiting_piece = true;
    } else if (tag == "PIECE") {
      std::string kind;
      if (!awaiting_piece || !(ls >> kind)) return std::nullopt;
      if (kind == "const") {
        std::string v;
        if (!(ls >> v)) return std::nullopt;
        auto c = scalar_parse(v);
        if (!c) return std::nullopt;
        f.pieces.push_back(Piece::constant(*c));
      } else if (kind == "affine") {
        std::string s, i;
        if (!(ls >> s >> i)) return std::nullopt;
        auto sv = scalar_parse(s), iv = scalar_parse(i);
        if (!sv || !iv || scalar_sign(*sv) == 0) return std::nullopt;
        f.pieces.push_back(Piece::affine(*sv, *iv));
      } else if (kind == "cantor") {
        std::string a, b, g, d;
        if (!(ls >> a >> b >> g >> d)) return std::nullopt;
        auto av = rat_parse(a), bv = rat_parse(b), gv = rat_parse(g), dv = rat_parse(d);
        if (!av || !bv || !gv || !dv || *av == 0 || *bv == 0) return std::nullopt;
        f.pieces.push_back(Piece::cantor_affine(*av, *bv, *gv, *dv));
      } else if (kind == "squash") {
        std::string v;
        if (!(ls >> v)) return std::nullopt;
        auto c = scalar_parse(v);
        if (!c) return std::nullopt;
        f.pieces.push_back(Piece::squash(*c));
      } else if (kind == "deferred") {
        long id;
        if (!(ls >> id)) return std::nullopt;
        f.pieces.push_back(Piece::deferred(id));
      } else {
        return std::nullopt;
      }
      awaiting_piece = false;
    } else if (tag == "DOM") {
      std::string slo, shi, flc, fhc;
      if (!f.partial || !(ls >> slo >> shi >> flc >> fhc)) return std::nullopt;
      auto lo = ext_parse(slo), hi = ext_parse(shi);
      if (!lo || !hi) return std::nullopt;
      bool lc, hc;
      if (flc == "closed") lc = true;
      else if (flc == "open") lc = false;
      else return std::nullopt;
      if (fhc == "closed") hc = true;
      else if (fhc == "open") hc = false;
      else return std::nullopt;
      try {
        dom.push_back(IntervalAtom(*lo, *hi, lc, hc));
      } catch (const BadIntervalError&) {
        return std::nullopt;
      }
    } else {
      return std::nullopt;
    }
  }
  if (!have_header || awaiting_piece || f.pieces.empty()) return std::nullopt;
  if (f.pieces.size() != f.breakpoints.size() + 1) return std::nullopt;
  if (!prev_hi || prev_hi->tag != ExtScalar::Tag::PlusInf) return std::nullopt;
  if (f.partial) f.domain = fu_normalize(std::move(dom));
  return f;
}

}  // namespace rwb
