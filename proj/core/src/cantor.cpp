#include "rwb/cantor.hpp"

#include <map>

namespace rwb {

namespace {

// Value on [0,1), computed from the canonical ternary expansion.
Rational value01(const Rational& t) {
  TernaryExpansion e = ternary_of(t);
  size_t pre = e.preperiod.size(), per = e.period.size();

  // Find the first digit 1, if any; it can only appear within the first
  // preperiod + period digits.
  size_t first_one = 0;  // 1-based; 0 means none
  for (size_t n = 1; n <= pre + per; ++n) {
    if (e.digit(n) == 1) {
      first_one = n;
      break;
    }
  }

  if (first_one) {
    Rational acc(0);
    for (size_t n = 1; n < first_one; ++n) acc += Rational(e.digit(n), 2) * pow2(-(long)n);
    return acc + pow2(-(long)first_one);
  }

  // All digits 0/2: halve each digit and read the result in base 2.
  Rational acc(0);
  for (size_t n = 1; n <= pre; ++n) acc += Rational(e.digit(n), 2) * pow2(-(long)n);
  Integer p2 = 0, two_l = 1;
  for (int d : e.period) {
    p2 = p2 * 2 + d / 2;
    two_l *= 2;
  }
  acc += pow2(-(long)pre) * Rational(p2, two_l - 1);
  return acc;
}

}  // namespace

Rational cantor_value(const Rational& q) {
  Integer n0 = rat_floor(q);
  Rational t = q - Rational(n0);
  return Rational(n0) + value01(t);
}

bool in_cantor_set(const Rational& q) {
  if (q < 0 || q > 1) return false;
  TernaryExpansion e = ternary_of(q);
  auto all02 = [](const std::vector<int>& v) {
    for (int d : v)
      if (d == 1) return false;
    return true;
  };
  if (all02(e.preperiod) && all02(e.period)) return true;
  // Boundary points have a second, terminating expansion: preperiod with the
  // last digit incremented (the canonical form ends in the pure period [2]).
  if (e.period == std::vector<int>{2} && !e.preperiod.empty()) {
    std::vector<int> alt = e.preperiod;
    alt.back() += 1;
    return all02(alt);
  }
  return false;
}

bool cantor_preimage_member(const Rational& x, const Rational& offset) {
  return is_dyadic_rational(cantor_value(x) - offset);
}

std::pair<Rational, Rational> cantor_level_set(const Rational& v) {
  Integer n0 = rat_floor(v);
  Rational t = v - Rational(n0);
  if (t == 0) return {Rational(n0), Rational(n0)};

  // Binary digits of t by doubling; the orbit of a rational is finite.
  std::vector<int> digits;
  std::map<Rational, size_t> seen;
  Rational cur = t;
  size_t start = 0;
  bool terminated = false;
  for (;;) {
    if (cur == 0) {
      terminated = true;
      break;
    }
    auto it = seen.find(cur);
    if (it != seen.end()) {
      start = it->second;
      break;
    }
    seen.emplace(cur, digits.size());
    cur *= 2;
    if (cur >= 1) {
      digits.push_back(1);
      cur -= 1;
    } else {
      digits.push_back(0);
    }
  }

  Rational base(n0);
  if (terminated) {
    // Dyadic t = 0.b1..bm with bm = 1: the plateau is
    // [prefix + 3^-m, prefix + 2*3^-m] with prefix = sum 2 b_i 3^-i, i < m.
    size_t m = digits.size();
    Rational prefix(0), scale(1);
    for (size_t i = 0; i + 1 < m; ++i) {
      scale /= 3;
      prefix += 2 * digits[i] * scale;
    }
    scale /= 3;  // 3^-m
    return {base + prefix + scale, base + prefix + 2 * scale};
  }

  // Non-dyadic: unique preimage point with ternary digits 2*b_i.
  TernaryExpansion e;
  for (size_t i = 0; i < start; ++i) e.preperiod.push_back(2 * digits[i]);
  for (size_t i = start; i < digits.size(); ++i) e.period.push_back(2 * digits[i]);
  Rational x = e.value();
  return {base + x, base + x};
}

}  // namespace rwb
