#pragma once

#include "essreg/core.hpp"

#include <vector>

namespace er {

// Minimum-cost assignment of rows to columns (Kuhn-Munkres, O(n^3)).
// Rectangular inputs are padded with zero-cost dummies; row_to_col[r] is -1
// when row r lands on a dummy column.
struct Assignment {
    std::vector<long> row_to_col;
    double total_cost = 0.0;
};

Assignment hungarian_min(const Matrix& cost);
Assignment hungarian_max(const Matrix& profit);

}  // namespace er
