#include <algorithm>
#include <array>

#include "rwb/cantor.hpp"
#include "rwb/constructions.hpp"

namespace rwb {

namespace {

// Total map through the given graph points: affine between consecutive
// pairs (constant where the values agree), constant beyond both ends.
// The x's must be strictly increasing and the y's weakly increasing.
PiecewiseMap map_from_anchor_pairs(const std::vector<std::pair<Scalar, Scalar>>& pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("need at least two anchor pairs");
  PiecewiseMap f;
  f.pieces.push_back(Piece::constant(pairs.front().second));
  for (size_t i = 0; i + 1 < pairs.size(); ++i) {
    const auto& [x0, y0] = pairs[i];
    const auto& [x1, y1] = pairs[i + 1];
    if (!(x0 < x1)) throw std::invalid_argument("anchor pairs out of order");
    f.breakpoints.push_back(x0);
    if (y0 == y1) {
      f.pieces.push_back(Piece::constant(y0));
    } else {
      Scalar slope = (y1 - y0) / (x1 - x0);
      f.pieces.push_back(Piece::affine(slope, y0 - slope * x0));
    }
  }
  f.breakpoints.push_back(pairs.back().first);
  f.pieces.push_back(Piece::constant(pairs.back().second));
  return f;
}

}  // namespace

PiecewiseMap iso_to_reduction(const EmbeddingScheme& scheme, const ShiftWord& w,
                              const SubsetPattern& a, const SubsetPattern& b,
                              size_t blocks, IntervalAtom* window) {
  if (scheme.order != OrderTag::Zomega || scheme.arity != 4)
    throw WitnessInvalidError("the anchor correspondence needs the four-copy Zomega scheme");
  if (!sigma_preserves_star(a, b, w))
    throw WitnessInvalidError("the word does not map the star coding of a into that of b");
  long n = static_cast<long>(std::max<size_t>(blocks / 2, 1));
  std::vector<std::pair<Scalar, Scalar>> pairs;
  std::optional<Rational> prev_image_base;
  for (long j = -n; j <= n; ++j) {
    OrderElement u = OrderElement::zv(ZVec::unit(0, j));
    OrderElement t = OrderElement::zv(apply_shift(w, u.z));
    Rational tb = scheme.base_embed(t);
    if (prev_image_base && !(*prev_image_base < tb))
      throw WitnessInvalidError("the word is not increasing along the chain");
    prev_image_base = tb;
    if (j == n) {
      pairs.push_back({Scalar(scheme.xi(u, 0)), Scalar(scheme.xi(t, 0))});
      break;
    }
    bool src_point = astar_member(a, u.z);
    bool img_point = astar_member(b, t.z);
    if (src_point && !img_point)
      throw WitnessInvalidError("a star-coded block maps onto an interval block");
    for (unsigned k = 0; k < 3; ++k)
      pairs.push_back({Scalar(scheme.xi(u, k)), Scalar(scheme.xi(t, k))});
    // The closed part [xi2, xi3] collapses to the image point xi2 when only
    // the image block is star-coded.
    pairs.push_back({Scalar(scheme.xi(u, 3)),
                     Scalar(!src_point && img_point ? scheme.xi(t, 2) : scheme.xi(t, 3))});
  }
  if (window)
    *window = IntervalAtom::closed(pairs.front().first, pairs.back().first);
  return map_from_anchor_pairs(pairs);
}

PiecewiseMap subsetfin_reduction(const SubsetPattern& a, const SubsetPattern& b,
                                 size_t blocks, IntervalAtom* window) {
  if (!subset_fin(a, b)) throw NotAlmostContainedError();
  size_t n0 = subset_fin_threshold(a, b);
  return iso_to_reduction(EmbeddingScheme::zomega(4), ShiftWord::single(n0, -1), a, b, blocks,
                          window);
}

LStructureView image_structure_check(const PiecewiseMap& f, const SubsetPattern& a,
                                     const IntervalAtom& window, size_t depth) {
  LStructureView src = extract_structure(SetExpr::family34(a), window, depth);
  LStructureView out;
  auto exact_at = [&](const Rational& x) {
    EvalResult r = eval(f, Scalar(x));
    if (!r.exact || !r.value.is_rational())
      throw UnsupportedError("the image structure needs exact rational values");
    return r.value.a;
  };
  for (const LBlock& blk : src.blocks) {
    LBlock img = blk;
    img.anchor0 = exact_at(blk.anchor0);
    img.anchor1 = exact_at(blk.anchor1);
    if (img.anchor0 < img.anchor1) {
      img.half_open = IntervalAtom(ExtScalar(Scalar(img.anchor0)), ExtScalar(Scalar(img.anchor1)),
                                   true, false);
    } else if (img.anchor1 < img.anchor0) {
      // Reversed orientation: the closed end follows the image of anchor0.
      img.half_open = IntervalAtom(ExtScalar(Scalar(img.anchor1)), ExtScalar(Scalar(img.anchor0)),
                                   false, true);
    } else {
      throw UnsupportedError("a block's half-open part collapsed to a point");
    }
    out.blocks.push_back(std::move(img));
  }
  return out;
}

PiecewiseMap belowQ_reduction(const SubsetPattern& a, const SubsetPattern& b,
                              size_t blocks, IntervalAtom* window) {
  if (!subset_fin(a, b)) throw NotAlmostContainedError();
  size_t n0 = subset_fin_threshold(a, b);
  EmbeddingScheme sch = EmbeddingScheme::ord_pow(2);
  OrdinalCNF shift = ord_add(OrdinalCNF::omega_pow(n0), OrdinalCNF::finite(1));
  if (blocks == 0) blocks = 1;

  auto anchors = [&](const OrdinalCNF& o) {
    OrderElement e = OrderElement::ord(OrderTag::OrdOmegaPow, o);
    Rational base = sch.base_embed(e);
    Rational r = sch.private_radius(e);
    return std::array<Rational, 3>{base, base + r / 4, base + 2 * r};
  };
  auto enlarged = [](const OrdinalCNF& o, const SubsetPattern& p) {
    // The block of a pure power w^m carries the enlarged window unless m is
    // in the pattern.
    if (o.terms.size() != 1 || o.terms[0].second != 1) return false;
    return !p.contains(o.terms[0].first);
  };

  std::vector<std::pair<Scalar, Scalar>> pairs;
  for (size_t i = 0; i <= blocks; ++i) {
    OrdinalCNF src = OrdinalCNF::finite(i);
    OrdinalCNF img = ord_add(shift, src);
    auto [s0, s1, s2] = anchors(src);
    auto [t0, t1, t2] = anchors(img);
    pairs.push_back({Scalar(s0), Scalar(t0)});
    if (i == blocks) break;
    pairs.push_back({Scalar(s1), Scalar(t1)});
    if (enlarged(img, b))
      throw WitnessInvalidError("the translate hit an enlarged target block");
    if (enlarged(src, a)) {
      // Collapse the enlarged part [0, 2/3] of the source window onto the
      // bottom of the image window; the remaining third expands onto the
      // whole image window (the self-similarity of the preimage set makes
      // this exact).
      pairs.push_back({Scalar(s1 + 2 * (s2 - s1) / 3), Scalar(t1)});
    }
  }
  if (window)
    *window = IntervalAtom::closed(Scalar(Rational(-1, 2)), pairs.back().first);
  return map_from_anchor_pairs(pairs);
}

bool anticomplete_distinct(const SubsetPattern& a, const SubsetPattern& b, size_t depth) {
  IntervalAtom window(ExtScalar(Scalar(Rational(-1) + pow2(-(long)depth - 3))),
                      ExtScalar(Scalar(Rational(1, 4))), true, true);
  try {
    LStructureView va = extract_structure(SetExpr::anticomplete(a), window, depth + 8);
    LStructureView vb = extract_structure(SetExpr::anticomplete(b), window, depth + 8);
    for (const LBlock& x : va.blocks)
      for (const LBlock& y : vb.blocks)
        if (x.elem == y.elem && x.compact_pattern != y.compact_pattern) return true;
    return false;
  } catch (const DepthExceededError&) {
    return false;  // nothing visible at this depth
  }
}

PiecewiseMap open_to_set_reduction(const SetExpr& U, const SetExpr& A, const Scalar& x,
                                   const ExtScalar& y) {
  auto fu = as_finite_union(U);
  if (!fu) throw UnsupportedError("the open set must be a finite union of intervals");
  FiniteUnion F = fu_normalize(*fu);
  if (fu_is_empty(F)) throw WitnessInvalidError("the open set is empty");
  for (const IntervalAtom& c : F)
    if (c.lo_closed || c.hi_closed) throw WitnessInvalidError("the set is not open");
  if (y.finite() && !(ExtScalar(x) < y)) throw WitnessInvalidError("empty target interval");
  if (member(A, x) != Verdict::Out)
    throw WitnessInvalidError("the base value is not certified outside the target set");
  Scalar cap = y.finite() && y.value < x + Scalar(Rational(1)) ? y.value : x + Scalar(Rational(1));
  Scalar peak = x + (cap - x) / Rational(2);
  if (member(A, peak) == Verdict::Out)
    throw WitnessInvalidError("the target interval misses the target set");

  PiecewiseMap f;
  if (fu_is_whole_line(F)) return PiecewiseMap::constant(peak);
  auto tent_up = [&](const Scalar& u, const Scalar& v) {  // (u, x) -> (v, peak)
    Scalar slope = (peak - x) / (v - u);
    return Piece::affine(slope, x - slope * u);
  };
  auto tent_down = [&](const Scalar& u, const Scalar& v) {  // (u, peak) -> (v, x)
    Scalar slope = (x - peak) / (v - u);
    return Piece::affine(slope, peak - slope * u);
  };
  bool at_base = true;  // whether the running left piece is the constant x
  for (const IntervalAtom& c : F) {
    if (!c.lo.finite()) {
      // (-inf, v): descend over the last unit of the component.
      Scalar v = c.hi.value;
      f.pieces.push_back(Piece::constant(peak));
      f.breakpoints.push_back(v - Scalar(Rational(1)));
      f.pieces.push_back(tent_down(v - Scalar(Rational(1)), v));
      f.breakpoints.push_back(v);
      at_base = true;
      continue;
    }
    if (at_base) f.pieces.push_back(Piece::constant(x));
    Scalar u = c.lo.value;
    if (!c.hi.finite()) {
      f.breakpoints.push_back(u);
      f.pieces.push_back(tent_up(u, u + Scalar(Rational(1))));
      f.breakpoints.push_back(u + Scalar(Rational(1)));
      f.pieces.push_back(Piece::constant(peak));
      at_base = false;
      break;
    }
    Scalar v = c.hi.value;
    Scalar mid = Rational(1, 2) * (u + v);
    f.breakpoints.push_back(u);
    f.pieces.push_back(tent_up(u, mid));
    f.breakpoints.push_back(mid);
    f.pieces.push_back(tent_down(mid, v));
    f.breakpoints.push_back(v);
    at_base = true;
  }
  if (at_base) f.pieces.push_back(Piece::constant(x));
  return f;
}

}  // namespace rwb
