#ifndef MLR_LP_HPP
#define MLR_LP_HPP

#include <vector>

#include "mlr/rational.hpp"

namespace mlr {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> x;
    Rational value;
};

// maximize c.x subject to A x = b, x >= 0, over exact rationals.
// Two-phase dense simplex with Bland's rule; deterministic, never cycles.
// Instances here are tiny (generators <= a few hundred, k <= 6).
LpResult solve_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                  const std::vector<Rational>& c);

}  // namespace mlr

#endif
