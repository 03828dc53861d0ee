#include "stage_engine.hpp"

#include <algorithm>
#include <sstream>

#include "rwb/cantor.hpp"

namespace rwb {

namespace detail {

Rational nth_rational(size_t k) {
  static std::vector<Rational> cache;
  static Integer height = 1;
  while (cache.size() <= k) {
    // All reduced n/d with |n| + d == height, d ascending then sign.
    for (Integer d = 1; d <= height; ++d) {
      Integer n = height - d;
      if (n == 0) {
        if (d == 1) cache.push_back(Rational(0));
        continue;
      }
      if (gcd(n, d) != 1) continue;
      cache.push_back(Rational(n, d));
      cache.push_back(Rational(-n, d));
    }
    ++height;
  }
  return cache[k];
}

Rational nth_unit_dyadic(size_t k) {
  if (k == 0) return Rational(0);
  long level = 1;
  size_t base = 1;
  while (base * 2 <= k) {
    base *= 2;
    ++level;
  }
  // k in [base, 2*base): the (k - base)-th odd numerator at this level.
  Integer numerator = 2 * Integer(k - base) + 1;
  return Rational(numerator) / pow2(level);
}

void insert_piece(StageState& st, AssignedPiece piece, const ValueChooser& vc,
                  std::vector<bool>& used_in, std::vector<bool>& used_out) {
  auto pos = std::lower_bound(st.gamma.begin(), st.gamma.end(), piece.lo,
                              [](const AssignedPiece& g, const Scalar& x) { return g.lo < x; });
  std::optional<Scalar> vlo, vhi;
  if (pos != st.gamma.begin()) {
    const AssignedPiece& prev = *std::prev(pos);
    if (!(prev.hi < piece.lo)) throw std::logic_error("stage pieces overlap");
    vlo = prev.vhi;
  }
  if (pos != st.gamma.end()) {
    if (!(piece.hi < pos->lo)) throw std::logic_error("stage pieces overlap");
    vhi = pos->vlo;
  }
  if (piece.value_index == SIZE_MAX) {
    // Seeded value; still has to respect the neighbors.
    if ((vlo && !(*vlo < piece.vlo)) || (vhi && !(piece.vhi < *vhi)))
      throw std::logic_error("seed value out of order");
  } else {
    const ValueStream& stream = piece.in_set ? vc.in_values : vc.out_values;
    std::vector<bool>& used = piece.in_set ? used_in : used_out;
    bool found = false;
    for (size_t k = 0; k < vc.budget; ++k) {
      if (k < used.size() && used[k]) continue;
      auto v = stream(k);
      if (!v) break;
      if ((vlo && !(*vlo < *v)) || (vhi && !(*v < *vhi))) continue;
      if (used.size() <= k) used.resize(k + 1, false);
      used[k] = true;
      piece.value_index = k;
      piece.vlo = piece.vhi = *v;
      piece.map_piece = Piece::constant(*v);
      found = true;
      break;
    }
    if (!found) throw std::logic_error("value stream exhausted between neighbors");
  }
  if (piece.in_set) {
    // The open value gap between the neighbors contains no assigned value,
    // in particular none of the outside values used so far.
    size_t avoided = 0;
    for (bool u : used_out)
      if (u) ++avoided;
    ExtScalar elo = vlo ? ExtScalar(*vlo) : ExtScalar::minus_inf();
    ExtScalar ehi = vhi ? ExtScalar(*vhi) : ExtScalar::plus_inf();
    st.ledger.push_back({IntervalAtom(elo, ehi, false, false), avoided});
  }
  st.gamma.insert(pos, std::move(piece));
}

void rebuild_map(StageState& st) {
  PiecewiseMap f;
  f.partial = true;
  FiniteUnion dom;
  for (size_t i = 0; i < st.gamma.size(); ++i) {
    if (i) f.breakpoints.push_back(st.gamma[i].lo);
    f.pieces.push_back(st.gamma[i].map_piece);
    for (const IntervalAtom& a : st.gamma[i].set) dom.push_back(a);
  }
  if (f.pieces.empty()) f.pieces.push_back(Piece::constant(Scalar(Rational(0))));
  f.domain = fu_normalize(std::move(dom));
  st.f = std::move(f);
}

OrdBlock ord_block(size_t i) {
  EmbeddingScheme sch = EmbeddingScheme::ord_pow(2);
  OrderElement e = OrderElement::ord(OrderTag::OrdOmegaPow, OrdinalCNF::finite(i));
  Rational base = sch.base_embed(e);
  Rational r = sch.private_radius(e);
  return {base, base + r / 4, base + 2 * r};
}

ValueChooser family35_chooser(const SubsetPattern& pattern, size_t blocks) {
  // Inside values: inner-window fibers of values congruent to 1/3 modulo
  // the dyadics, and outer-window plateau midpoints of dyadic values.
  // Outside values: inner-window plateau midpoints of dyadic values, and
  // outer-window fibers of non-dyadic values. Both streams are dense in
  // every block, so an admissible value always exists strictly between two
  // already assigned ones. Block 1 is the only finite block that can carry
  // the enlarged window; when it does, its outer-window values stay above
  // the enlarged part (staircase value above 1/2), where certification does
  // not depend on the pattern.
  if (blocks == 0) blocks = 1;
  bool block1_enlarged = !pattern.contains(0);
  auto nondyadic = [](size_t t) {  // dense in (0,1), all congruent to 1/3
    Rational v = nth_unit_dyadic(t) + Rational(1, 3);
    if (v >= 1) v -= 1;
    return v;
  };
  ValueChooser vc;
  vc.in_values = [blocks, block1_enlarged, nondyadic](size_t k) -> std::optional<Scalar> {
    size_t j = k % (2 * blocks), t = k / (2 * blocks);
    OrdBlock blk = ord_block(j % blocks);
    if (j / blocks == 0) {
      auto [p0, p1] = cantor_level_set(nondyadic(t));
      return Scalar(blk.s0 + p0 * (blk.s1 - blk.s0));
    }
    bool enlarged = (j % blocks) == 1 && block1_enlarged;
    Rational v = enlarged ? Rational(1, 2) + nth_unit_dyadic(t) / 2 : nth_unit_dyadic(t);
    auto [p0, p1] = cantor_level_set(v);
    return Scalar(blk.s1 + (p0 + p1) / 2 * (blk.s2 - blk.s1));
  };
  vc.out_values = [blocks, block1_enlarged, nondyadic](size_t k) -> std::optional<Scalar> {
    size_t j = k % (2 * blocks), t = k / (2 * blocks);
    OrdBlock blk = ord_block(j % blocks);
    if (j / blocks == 0) {
      auto [p0, p1] = cantor_level_set(nth_unit_dyadic(t));
      return Scalar(blk.s0 + (p0 + p1) / 2 * (blk.s1 - blk.s0));
    }
    bool enlarged = (j % blocks) == 1 && block1_enlarged;
    Rational v = enlarged ? Rational(1, 2) + nondyadic(t) / 2 : nondyadic(t);
    auto [p0, p1] = cantor_level_set(v);
    return Scalar(blk.s1 + p0 * (blk.s2 - blk.s1));
  };
  return vc;
}

ValueChooser rational_chooser() {
  ValueChooser vc;
  vc.in_values = [](size_t k) { return std::optional<Scalar>(Scalar(nth_rational(k))); };
  vc.out_values = [](size_t k) {
    return std::optional<Scalar>(Scalar(nth_rational(k), Rational(1)));
  };
  return vc;
}

}  // namespace detail

namespace {

using detail::ValueChooser;

AssignedPiece point_piece(const Scalar& x, bool in_set) {
  AssignedPiece p;
  p.set = FiniteUnion{IntervalAtom::point(x)};
  p.lo = p.hi = x;
  p.in_set = in_set;
  return p;
}

// The k-th inside/outside domain points of the staged source.
struct SourceSchedule {
  std::function<Scalar(size_t)> inside, outside;
};

SourceSchedule schedule_for(const SetExpr& S) {
  if (S.kind != SetExpr::Kind::Named)
    throw UnsupportedError("no staged enumerator for this source");
  switch (S.gen) {
    case Gen::Q2: {
      auto dy = [](size_t k) {
        // Signed dyadics: filter the rational enumeration.
        size_t seen = 0;
        for (size_t i = 0;; ++i) {
          Rational p = detail::nth_rational(i);
          if (!is_dyadic_rational(p)) continue;
          if (seen++ == k) return p;
        }
      };
      return {[dy](size_t k) { return Scalar(dy(k)); },
              [dy](size_t k) { return Scalar(dy(k), Rational(1)); }};
    }
    case Gen::Q:
      return {[](size_t k) { return Scalar(detail::nth_rational(k)); },
              [](size_t k) { return Scalar(detail::nth_rational(k), Rational(1)); }};
    case Gen::Family35: {
      return {[](size_t k) {
                detail::OrdBlock blk = detail::ord_block(k % 4);
                Rational v = Rational(1, 3) + detail::nth_unit_dyadic(k / 4) / 2;
                auto [p0, p1] = cantor_level_set(v);
                return Scalar(blk.s0 + p0 * (blk.s1 - blk.s0));
              },
              [](size_t k) {
                detail::OrdBlock blk = detail::ord_block(k % 4);
                Rational v = Rational(7, 12) + detail::nth_unit_dyadic(k / 4) / 4;
                auto [p0, p1] = cantor_level_set(v);
                return Scalar(blk.s1 + p0 * (blk.s2 - blk.s1));
              }};
    }
    default:
      throw UnsupportedError("no staged enumerator for this source");
  }
}

}  // namespace

std::string stage_state_to_string(const StageState& st) {
  std::ostringstream os;
  os << map_to_string(st.f);
  os << "STAGE " << st.n << "\n";
  os << "EPS " << rat_to_string(st.eps) << "\n";
  for (const LedgerEntry& e : st.ledger) {
    std::string atom = interval_to_string(e.interval);
    atom.erase(std::remove(atom.begin(), atom.end(), ' '), atom.end());
    os << "LEDGER " << atom << " avoid=" << e.avoid << "\n";
  }
  return os.str();
}

std::vector<StageState> reduce_to_Q_trace(const SetExpr& S, size_t stages) {
  IFlags flags;
  try {
    flags = check_I(S);
  } catch (const UnsupportedError&) {
    throw NotConditionIError();
  }
  if (!flags.i0 || !flags.i1) throw NotConditionIError();
  SourceSchedule sched = schedule_for(S);
  ValueChooser vc = detail::rational_chooser();

  StageState st;
  std::vector<bool> used_in, used_out;
  std::vector<StageState> trace;
  for (size_t k = 0; k <= stages; ++k) {
    detail::insert_piece(st, point_piece(sched.inside(k), true), vc, used_in, used_out);
    detail::insert_piece(st, point_piece(sched.outside(k), false), vc, used_in, used_out);
    st.n = k;
    st.eps = pow2(-(long)k);
    detail::rebuild_map(st);
    trace.push_back(st);
  }
  return trace;
}

StageState reduce_to_Q(const SetExpr& S, size_t stages) {
  return reduce_to_Q_trace(S, stages).back();
}

}  // namespace rwb
