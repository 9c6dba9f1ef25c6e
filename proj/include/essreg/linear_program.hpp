#pragma once

#include "essreg/core.hpp"

namespace er {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vector x;
    double objective = 0.0;
    Index iterations = 0;
};

// Dense two-phase tableau simplex for
//   minimize c^T x  subject to  A x <= b,  x >= 0.
// Bland's rule is used for entering/leaving choices, so the method cannot cycle.
// Meant for the small problems of the loading estimator (tens of variables).
LpResult solve_lp(const Vector& c, const Matrix& a, const Vector& b);

// argmin ||v||_1 subject to ||S v - target||_inf <= radius, solved as an LP
// in the split variables v = u - w, u, w >= 0. Throws LpInfeasible.
Vector l1_min_sup_constraint(const Matrix& s, const Vector& target, double radius);

}  // namespace er
