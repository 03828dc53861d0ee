#include "stage_engine.hpp"

#include <algorithm>

#include "rwb/cantor.hpp"

namespace rwb {

namespace {

IntervalAtom unit_window() { return IntervalAtom::closed(Scalar(Rational(0)), Scalar(Rational(1))); }

struct DomainEntry {
  IntervalAtom span;   // closed piece used as the domain set
  bool in_set = false;  // certified inside the minimal compact set
};

// Inner-truncation components and shrunken gap cores of the minimal
// compact set over [0,1], interleaved in position order. The truncation
// depth is fixed so every stage prefix extends the previous one.
std::vector<DomainEntry> minimal_domain_stream() {
  Truncation t = truncate(SetExpr::named(Gen::MinCompact), unit_window(), 3);
  std::vector<DomainEntry> out;
  for (const IntervalAtom& c : components(t.inner)) out.push_back({c, true});
  FiniteUnion gaps = fu_intersect(fu_complement(t.outer), FiniteUnion{unit_window()});
  for (const IntervalAtom& g : components(gaps)) {
    // Shrink to the closed middle half so every sample point is strictly
    // inside the certified gap.
    Scalar len = g.hi.value - g.lo.value;
    out.push_back({IntervalAtom::closed(g.lo.value + Rational(1, 4) * len,
                                        g.hi.value - Rational(1, 4) * len),
                   false});
  }
  std::sort(out.begin(), out.end(), [](const DomainEntry& a, const DomainEntry& b) {
    return a.span.lo.value < b.span.lo.value;
  });
  return out;
}

AssignedPiece span_piece(const DomainEntry& e) {
  AssignedPiece p;
  p.set = FiniteUnion{e.span};
  p.lo = e.span.lo.value;
  p.hi = e.span.hi.value;
  p.in_set = e.in_set;
  return p;
}

// Left endpoints of the 2^m level-m intervals of the middle-thirds set,
// with the interval length 3^-m.
std::vector<Rational> ternary_level(size_t m, Rational& len) {
  std::vector<Rational> lo{Rational(0)};
  len = Rational(1);
  for (size_t i = 0; i < m; ++i) {
    std::vector<Rational> next;
    len /= 3;
    for (const Rational& a : lo) {
      next.push_back(a);
      next.push_back(a + 2 * len);
    }
    lo = next;
  }
  return lo;
}

StageState assemble(std::vector<AssignedPiece> gamma, size_t stages) {
  StageState st;
  st.n = stages;
  st.eps = pow2(-(long)stages);
  st.gamma = std::move(gamma);
  detail::rebuild_map(st);
  return st;
}

}  // namespace

Truncation min_compact_truncation(size_t depth) {
  return truncate(SetExpr::named(Gen::MinCompact), unit_window(), depth);
}

Truncation min_fsigma_truncation(size_t depth) {
  return truncate(SetExpr::named(Gen::MinFsigma), unit_window(), depth);
}

StageState reduce_minimal_compact(const SetExpr& target, size_t stages) {
  std::vector<DomainEntry> stream = minimal_domain_stream();
  size_t take = std::min(stream.size(), 2 * (stages + 1));
  size_t inside = 0;
  for (size_t i = 0; i < take; ++i)
    if (stream[i].in_set) ++inside;

  std::vector<AssignedPiece> gamma;
  auto fu = as_finite_union(target);
  if (fu) {
    // The finite-union case: every inside piece lands increasingly in a
    // private slot of the first target component, every gap piece at a
    // fixed value below the whole target. (The map is not order-coherent
    // as a whole; no increasing map can leave and re-enter an interval.)
    FiniteUnion B = fu_normalize(*fu);
    if (fu_is_empty(B)) throw EmptyTargetError();
    for (const IntervalAtom& c : B)
      if (!c.lo.finite() || !c.hi.finite() || !c.lo_closed || !c.hi_closed)
        throw UnsupportedError("the target must be a finite union of closed bounded intervals");
    const IntervalAtom& C = B.front();
    Scalar out_value = C.lo.value - Scalar(Rational(1));
    Scalar L = C.hi.value - C.lo.value;
    size_t j = 0;
    for (size_t i = 0; i < take; ++i) {
      AssignedPiece p = span_piece(stream[i]);
      if (p.in_set) {
        if (scalar_sign(L) == 0) {
          p.vlo = p.vhi = C.lo.value;
          p.map_piece = Piece::constant(C.lo.value);
        } else {
          Scalar slo = C.lo.value + Rational(Integer(4 * j + 1), Integer(4 * inside)) * L;
          Scalar shi = C.lo.value + Rational(Integer(4 * j + 3), Integer(4 * inside)) * L;
          Scalar slope = (shi - slo) / (p.hi - p.lo);
          p.vlo = slo;
          p.vhi = shi;
          p.map_piece = Piece::affine(slope, slo - slope * p.lo);
        }
        ++j;
      } else {
        p.vlo = p.vhi = out_value;
        p.map_piece = Piece::constant(out_value);
      }
      gamma.push_back(std::move(p));
    }
    return assemble(std::move(gamma), stages);
  }

  if (target.kind != SetExpr::Kind::Named ||
      (target.gen != Gen::CantorSet && target.gen != Gen::MinCompact))
    throw UnsupportedError("unsupported reduction target");

  if (target.gen == Gen::MinCompact) {
    // Self-similar target: inside pieces ride the identity, gap cores
    // collapse to their own midpoints (certified outside).
    for (size_t i = 0; i < take; ++i) {
      AssignedPiece p = span_piece(stream[i]);
      if (p.in_set) {
        p.vlo = p.lo;
        p.vhi = p.hi;
        p.map_piece = Piece::affine(Scalar(Rational(1)), Scalar(Rational(0)));
      } else {
        Scalar mid = Rational(1, 2) * (p.lo + p.hi);
        p.vlo = p.vhi = mid;
        p.map_piece = Piece::constant(mid);
      }
      gamma.push_back(std::move(p));
    }
    return assemble(std::move(gamma), stages);
  }

  // Middle-thirds target: the j-th inside piece collapses to the left
  // endpoint of the j-th level-m interval; a gap piece collapses to the
  // midpoint of the removed gap between the neighboring level-m intervals.
  size_t m = 0;
  while ((size_t(1) << m) < std::max<size_t>(inside, 1)) ++m;
  Rational len;
  std::vector<Rational> level = ternary_level(m, len);
  size_t j = 0;
  for (size_t i = 0; i < take; ++i) {
    AssignedPiece p = span_piece(stream[i]);
    Scalar v;
    if (p.in_set) {
      v = Scalar(level[j]);
      ++j;
    } else if (j == 0) {
      v = Scalar(Rational(-1, 2));  // before the first interval
    } else if (j >= level.size()) {
      v = Scalar(Rational(3, 2));  // past the last interval
    } else {
      v = Scalar((level[j - 1] + len + level[j]) / 2);
    }
    p.vlo = p.vhi = v;
    p.map_piece = Piece::constant(v);
    gamma.push_back(std::move(p));
  }
  return assemble(std::move(gamma), stages);
}

GlueResult glue_minimal(const SetExpr& B, size_t cells, size_t stages_per_cell) {
  if (cells == 0) throw BadAnchorsError("need at least one cell");

  // Domain anchors: midpoints of the left thick ends of the descending
  // copies of the compact set inside the F-sigma set, in ascending order.
  GlueResult res;
  for (size_t k = 0; k <= cells; ++k) {
    size_t c = cells - k;
    Rational base = pow2(0) / rat_pow(Rational(3), (unsigned long)c + 1);
    Scalar x = Scalar(base * Rational(9, 8));
    if (member(SetExpr::named(Gen::MinFsigma), x) != Verdict::In)
      throw BadAnchorsError("domain anchor not certified inside the set");
    res.x_anchors.push_back(x);
  }

  detail::ValueChooser vc;
  if (B.kind == SetExpr::Kind::Named && B.gen == Gen::Q) {
    vc = detail::rational_chooser();
    for (size_t k = 0; k <= cells; ++k) res.y_anchors.push_back(Scalar(Rational((long)k)));
  } else if (B.kind == SetExpr::Kind::Named && B.gen == Gen::Family35) {
    size_t blocks = std::max<size_t>(6, cells + 2);
    vc = detail::family35_chooser(B.pattern, blocks);
    auto [p0, p1] = cantor_level_set(Rational(1, 3));
    for (size_t k = 0; k <= cells; ++k) {
      detail::OrdBlock blk = detail::ord_block(k);
      res.y_anchors.push_back(Scalar(blk.s0 + p0 * (blk.s1 - blk.s0)));
    }
  } else {
    throw UnsupportedError("unsupported glue target");
  }
  for (const Scalar& y : res.y_anchors)
    if (member(B, y) != Verdict::In) throw BadAnchorsError("image anchor not certified in the target");

  for (size_t k = 0; k < cells; ++k) {
    StageState st;
    std::vector<bool> used_in, used_out;
    auto seed = [&](const Scalar& x, const Scalar& y) {
      AssignedPiece p;
      p.set = FiniteUnion{IntervalAtom::point(x)};
      p.lo = p.hi = x;
      p.in_set = true;
      p.value_index = SIZE_MAX;
      p.vlo = p.vhi = y;
      p.map_piece = Piece::constant(y);
      detail::insert_piece(st, std::move(p), vc, used_in, used_out);
    };
    seed(res.x_anchors[k], res.y_anchors[k]);
    seed(res.x_anchors[k + 1], res.y_anchors[k + 1]);

    // Candidate domain points: the dyadic subdivision of the cell,
    // classified by exact membership; each stage adds one certified inside
    // point and one certified outside point.
    Scalar span = res.x_anchors[k + 1] - res.x_anchors[k];
    size_t cursor = 1;
    SetExpr A = SetExpr::named(Gen::MinFsigma);
    for (size_t s = 0; s < stages_per_cell; ++s) {
      bool need_in = true, need_out = true;
      while ((need_in || need_out) && cursor < 4096) {
        Scalar x = res.x_anchors[k] + detail::nth_unit_dyadic(cursor++) * span;
        Verdict v = member(A, x);
        if (v == Verdict::In && need_in) {
          AssignedPiece p;
          p.set = FiniteUnion{IntervalAtom::point(x)};
          p.lo = p.hi = x;
          p.in_set = true;
          detail::insert_piece(st, std::move(p), vc, used_in, used_out);
          need_in = false;
        } else if (v == Verdict::Out && need_out) {
          AssignedPiece p;
          p.set = FiniteUnion{IntervalAtom::point(x)};
          p.lo = p.hi = x;
          p.in_set = false;
          detail::insert_piece(st, std::move(p), vc, used_in, used_out);
          need_out = false;
        }
      }
      if (need_in || need_out)
        throw BadAnchorsError("ran out of classified points inside the cell");
      st.n = s;
      st.eps = pow2(-(long)s);
    }
    detail::rebuild_map(st);
    res.cells.push_back(std::move(st));
  }
  return res;
}

}  // namespace rwb
