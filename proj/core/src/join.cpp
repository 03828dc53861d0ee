#include "rwb/constructions.hpp"

namespace rwb {

JoinResult upper_bound_join(const std::vector<SetExpr>& sets) {
  JoinResult r{SetExpr::make_join(sets), {}};
  for (size_t n = 0; n < sets.size(); ++n) {
    PiecewiseMap m;
    m.pieces.push_back(Piece::squash(Scalar(Rational(static_cast<long>(n)))));
    r.maps.push_back(std::move(m));
  }
  return r;
}

}  // namespace rwb
