#pragma once

#include <vector>

#include "revpref/rational.hpp"

namespace revpref {

struct LpSolution {
  RationalVector x;
  Rational value;
};

/// Exact primal simplex with Bland's rule for
///   maximize c.x  subject to  A x <= b,  x >= 0,
/// where b >= 0 so the origin is a feasible starting vertex. Throws
/// std::domain_error when the problem is unbounded.
LpSolution maximize_lp(const std::vector<RationalVector>& a, const RationalVector& b,
                       const RationalVector& c);

}  // namespace revpref
