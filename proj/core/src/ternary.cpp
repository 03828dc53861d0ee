#include "rwb/ternary.hpp"

#include <map>

namespace rwb {

Rational TernaryExpansion::value() const {
  Rational acc(0), scale(1);
  for (int d : preperiod) {
    scale /= 3;
    acc += d * scale;
  }
  // The period contributes P / (3^L - 1) scaled past the preperiod, where P
  // is the period read as a base-3 integer.
  Integer p = 0, three_l = 1;
  for (int d : period) {
    p = p * 3 + d;
    three_l *= 3;
  }
  acc += scale * Rational(p, three_l - 1);
  return acc;
}

TernaryExpansion ternary_of(const Rational& q) {
  if (q < 0 || q > 1) throw OutOfRangeError("ternary_of argument outside [0,1]");
  if (q == 1) return TernaryExpansion{{}, {2}};

  // Long division in base 3. The state is the current remainder; the first
  // repeated remainder closes the (minimal) period, and everything before
  // its first occurrence is the (minimal) preperiod.
  Integer d = den(q);
  Integer r = num(q);
  std::vector<int> digits;
  std::map<Integer, size_t> seen;  // remainder -> index of digit it produces
  size_t start;
  for (;;) {
    auto it = seen.find(r);
    if (it != seen.end()) {
      start = it->second;
      break;
    }
    seen.emplace(r, digits.size());
    r *= 3;
    Integer dig = r / d;
    r -= dig * d;
    digits.push_back(static_cast<int>(dig));
  }
  TernaryExpansion e;
  e.preperiod.assign(digits.begin(), digits.begin() + static_cast<long>(start));
  e.period.assign(digits.begin() + static_cast<long>(start), digits.end());

  // Canonical form avoids trailing zeros: a terminating expansion (period
  // [0]) of a nonzero rational is rewritten to end in the pure period [2],
  // e.g. 0.1000... becomes 0.0222... .
  if (q != 0 && e.period == std::vector<int>{0}) {
    while (!e.preperiod.empty() && e.preperiod.back() == 0) e.preperiod.pop_back();
    e.preperiod.back() -= 1;  // the digit before the trailing zeros is nonzero
    e.period = {2};
  }
  return e;
}

}  // namespace rwb
