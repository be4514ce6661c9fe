#pragma once

// Dense two-phase simplex over exact rationals. Only meant for the small
// systems built from stoichiometry (tens of variables).

#include <vector>

#include "crn/rates.hpp"

namespace crn::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value = 0;
  std::vector<Rational> x;
};

/// maximize c.x subject to A x = b, x >= 0. Bland's rule, so it terminates.
LpResult maximize(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                  const std::vector<Rational>& c);

}  // namespace crn::detail
