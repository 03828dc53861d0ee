#ifndef RWB_VERIFY_HPP
#define RWB_VERIFY_HPP

// Deterministic grid verification of reduction candidates (x in A iff
// f(x) in B) and the order-coherence check for partial maps.

#include "rwb/pwmap.hpp"
#include "rwb/setexpr.hpp"

namespace rwb {

struct FailureWitness {
  Scalar x;
  Verdict in_a = Verdict::Unknown;
  EvalResult fx;
  Verdict in_b = Verdict::Unknown;
};

struct VerificationReport {
  size_t samples = 0;
  size_t passes = 0;
  size_t inconclusive = 0;
  std::vector<FailureWitness> failures;  // ordered by sample position

  bool pass() const { return failures.empty(); }
};

// Samples grid_n + 1 equally spaced points of the window, plus the map's
// breakpoints and the block anchors of any family generators inside the
// window, in increasing order, and checks x in A iff f(x) in B. A sample is
// inconclusive when either membership cannot be certified at the given
// depth (including a certified-interval value straddling B's boundary).
VerificationReport verify_reduction(const PiecewiseMap& f, const SetExpr& A, const SetExpr& B,
                                    const IntervalAtom& window, size_t grid_n,
                                    size_t depth = 64);

// For a partial map: successive domain pieces with distinct image hulls
// must be disjoint and ordered in one global monotone direction
// (direction: +1 increasing, -1 decreasing, 0 infer from the data); pieces
// with equal hulls are allowed anywhere. Total maps pass vacuously.
bool coherence_check(const PiecewiseMap& f, int direction = 0);

}  // namespace rwb

#endif
