#ifndef RWB_TERNARY_HPP
#define RWB_TERNARY_HPP

// Canonical eventually-periodic base-3 expansions of rationals in [0,1].

#include <stdexcept>
#include <vector>

#include "rwb/rational.hpp"

namespace rwb {

struct OutOfRangeError : std::runtime_error {
  explicit OutOfRangeError(const std::string& m) : std::runtime_error(m) {}
};

// preperiod then period, digits in {0,1,2}; the period is nonempty. The
// expansion uses the terminating (no trailing 2s) convention: rationals with
// a finite base-3 expansion get period [0], except 1, which is the pure
// period [2].
struct TernaryExpansion {
  std::vector<int> preperiod;
  std::vector<int> period;

  // Digit at 1-based position n (first digit after the point).
  int digit(size_t n) const {
    if (n == 0) throw std::out_of_range("ternary digit positions are 1-based");
    if (n <= preperiod.size()) return preperiod[n - 1];
    return period[(n - 1 - preperiod.size()) % period.size()];
  }

  // The exact rational value of the expansion.
  Rational value() const;
};

// Long-division expansion of q in [0,1]; canonical (shortest preperiod and
// period). Throws OutOfRangeError outside [0,1].
TernaryExpansion ternary_of(const Rational& q);

}  // namespace rwb

#endif
