#include "rwb/constructions.hpp"

namespace rwb {

namespace {

// Integer range [ceil(lo), floor(hi)] of k with k/den inside the window.
std::pair<Integer, Integer> scaled_range(const IntervalAtom& window, const Rational& den) {
  if (!window.lo.finite() || !window.hi.finite())
    throw UnsupportedError("decomposition window must be bounded");
  Integer k0 = scalar_floor(Scalar(den) * window.lo.value);
  Integer k1 = scalar_floor(Scalar(den) * window.hi.value);
  if (Scalar(Rational(k0)) < Scalar(den) * window.lo.value) ++k0;
  return {k0, k1};
}

}  // namespace

std::vector<FiniteUnion> decompose_fsigma(const SetExpr& S, const IntervalAtom& window,
                                          size_t depth) {
  IFlags flags;
  try {
    flags = check_I(S);
  } catch (const UnsupportedError&) {
    throw UnsupportedError("decomposition needs a finite union or a countable dense generator");
  }
  if (!flags.i0) throw NotI0Error();

  std::vector<FiniteUnion> pieces;
  if (auto fu = as_finite_union(S)) {
    FiniteUnion clipped = fu_intersect(fu_normalize(*fu), FiniteUnion{window});
    for (const IntervalAtom& comp : components(clipped)) pieces.push_back(FiniteUnion{comp});
    return pieces;
  }
  if (S.kind != SetExpr::Kind::Named || (S.gen != Gen::Q && S.gen != Gen::Q2))
    throw UnsupportedError("decomposition needs a finite union or a countable dense generator");

  auto add_point = [&](const Rational& p) {
    Scalar x{p};
    if (window.contains(x)) pieces.push_back(FiniteUnion{IntervalAtom::point(x)});
  };
  if (S.gen == Gen::Q2) {
    // Dyadics by level; only odd numerators above level zero, so every
    // point appears exactly once.
    for (size_t j = 0; j <= depth; ++j) {
      Rational den = pow2((long)j);
      auto [k0, k1] = scaled_range(window, den);
      for (Integer k = k0; k <= k1; ++k) {
        if (j > 0 && k % 2 == 0) continue;
        add_point(Rational(k) / den);
      }
    }
  } else {
    // Rationals with denominator up to depth+1, reduced fractions only.
    for (size_t q = 1; q <= depth + 1; ++q) {
      Rational den{(long)q};
      auto [k0, k1] = scaled_range(window, den);
      for (Integer k = k0; k <= k1; ++k) {
        if (q > 1 && gcd(abs(k), Integer((long)q)) != 1) continue;
        add_point(Rational(k) / den);
      }
    }
  }
  return pieces;
}

}  // namespace rwb
