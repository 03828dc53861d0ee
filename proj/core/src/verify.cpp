#include "rwb/verify.hpp"

#include <algorithm>

namespace rwb {

namespace {

// Block anchors of every family generator occurring in the expression,
// restricted to the window. Anchors are where the families change shape,
// so they are the most informative sample points.
void collect_anchors(const SetExpr& s, const IntervalAtom& window, size_t depth,
                     std::vector<Scalar>& out) {
  switch (s.kind) {
    case SetExpr::Kind::Named:
      if (s.gen == Gen::Family34 || s.gen == Gen::Family35 || s.gen == Gen::AntiComplete) {
        try {
          for (const LBlock& b : extract_structure(s, window, depth).blocks) {
            out.push_back(Scalar(b.anchor0));
            out.push_back(Scalar(b.anchor1));
          }
        } catch (const DepthExceededError&) {
        } catch (const UnsupportedError&) {
        }
      }
      break;
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter:
    case SetExpr::Kind::Compl:
      for (const SetExpr& c : s.children) collect_anchors(c, window, depth, out);
      break;
    default:
      break;
  }
}

Verdict member_guarded(const SetExpr& s, const Scalar& x, size_t depth) {
  try {
    return member(s, x, depth);
  } catch (const DepthExceededError&) {
    return Verdict::Unknown;
  }
}

// Membership of a whole certified interval: decidable when B reduces to a
// finite union that either swallows or misses the interval.
Verdict interval_member(const SetExpr& B, const Scalar& lo, const Scalar& hi) {
  auto F = as_finite_union(B);
  if (!F) return Verdict::Unknown;
  IntervalAtom box = IntervalAtom::closed(lo, hi);
  if (fu_is_empty(fu_intersect(*F, FiniteUnion{box}))) return Verdict::Out;
  if (fu_subset(FiniteUnion{box}, *F)) return Verdict::In;
  return Verdict::Unknown;
}

}  // namespace

VerificationReport verify_reduction(const PiecewiseMap& f, const SetExpr& A, const SetExpr& B,
                                    const IntervalAtom& window, size_t grid_n, size_t depth) {
  if (!window.lo.finite() || !window.hi.finite())
    throw UnsupportedError("verification window must be bounded");
  std::vector<Scalar> xs;
  const Scalar& lo = window.lo.value;
  const Scalar& hi = window.hi.value;
  Scalar span = hi - lo;
  for (size_t k = 0; k <= grid_n; ++k)
    xs.push_back(lo + Rational(Integer(k), Integer(grid_n == 0 ? 1 : grid_n)) * span);
  for (const Scalar& b : f.breakpoints)
    if (window.contains(b)) xs.push_back(b);
  collect_anchors(A, window, depth, xs);
  collect_anchors(B, window, depth, xs);
  if (f.partial) {
    // On a partial map the grid mostly misses the domain, so sample each
    // domain component at its finite endpoints and midpoint.
    for (const IntervalAtom& a : fu_normalize(f.domain)) {
      if (a.lo.finite() && a.lo_closed) xs.push_back(a.lo.value);
      if (a.hi.finite() && a.hi_closed) xs.push_back(a.hi.value);
      if (a.lo.finite() && a.hi.finite())
        xs.push_back(Rational(1, 2) * (a.lo.value + a.hi.value));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  VerificationReport rep;
  for (const Scalar& x : xs) {
    if (!window.contains(x)) continue;
    if (f.partial && !fu_contains(f.domain, x)) continue;
    ++rep.samples;
    Verdict a = member_guarded(A, x, depth);
    EvalResult fx = eval(f, x);
    Verdict b;
    if (fx.exact)
      b = member_guarded(B, fx.value, depth);
    else
      b = interval_member(B, fx.lo, fx.hi);
    if (a == Verdict::Unknown || b == Verdict::Unknown) {
      ++rep.inconclusive;
      continue;
    }
    if ((a == Verdict::In) == (b == Verdict::In)) {
      ++rep.passes;
    } else {
      rep.failures.push_back(FailureWitness{x, a, fx, b});
    }
  }
  return rep;
}

bool coherence_check(const PiecewiseMap& f, int direction) {
  if (!f.partial) return true;
  FiniteUnion comps = fu_normalize(f.domain);
  std::optional<std::pair<Scalar, Scalar>> prev;
  int dir = direction;
  for (const IntervalAtom& piece : comps) {
    auto hull = image_hull(f, piece);
    if (prev) {
      bool equal = prev->first == hull.first && prev->second == hull.second;
      if (!equal) {
        int d;
        if (prev->second < hull.first)
          d = 1;
        else if (hull.second < prev->first)
          d = -1;
        else
          return false;  // distinct hulls overlap
        if (dir == 0)
          dir = d;
        else if (dir != d)
          return false;
      }
    }
    prev = hull;
  }
  return true;
}

}  // namespace rwb
