#include "essreg/assignment.hpp"

#include <algorithm>
#include <limits>

namespace er {

Assignment hungarian_min(const Matrix& cost) {
    const long rows = cost.rows();
    const long cols = cost.cols();
    const long n = std::max(rows, cols);
    Assignment out;
    out.row_to_col.assign(static_cast<Index>(rows), -1);
    if (n == 0) return out;

    auto at = [&](long i, long j) { return (i < rows && j < cols) ? cost(i, j) : 0.0; };
    constexpr double inf = std::numeric_limits<double>::infinity();

    // 1-based potentials; col_owner[j] is the row assigned to column j.
    std::vector<double> u(static_cast<Index>(n + 1), 0.0), v(static_cast<Index>(n + 1), 0.0);
    std::vector<long> col_owner(static_cast<Index>(n + 1), 0), way(static_cast<Index>(n + 1), 0);
    for (long i = 1; i <= n; ++i) {
        col_owner[0] = i;
        long j0 = 0;
        std::vector<double> minv(static_cast<Index>(n + 1), inf);
        std::vector<char> used(static_cast<Index>(n + 1), 0);
        do {
            used[static_cast<Index>(j0)] = 1;
            const long i0 = col_owner[static_cast<Index>(j0)];
            double delta = inf;
            long j1 = 0;
            for (long j = 1; j <= n; ++j) {
                if (used[static_cast<Index>(j)]) continue;
                const double cur = at(i0 - 1, j - 1) - u[static_cast<Index>(i0)] - v[static_cast<Index>(j)];
                if (cur < minv[static_cast<Index>(j)]) {
                    minv[static_cast<Index>(j)] = cur;
                    way[static_cast<Index>(j)] = j0;
                }
                if (minv[static_cast<Index>(j)] < delta) {
                    delta = minv[static_cast<Index>(j)];
                    j1 = j;
                }
            }
            for (long j = 0; j <= n; ++j) {
                if (used[static_cast<Index>(j)]) {
                    u[static_cast<Index>(col_owner[static_cast<Index>(j)])] += delta;
                    v[static_cast<Index>(j)] -= delta;
                } else {
                    minv[static_cast<Index>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (col_owner[static_cast<Index>(j0)] != 0);
        do {
            const long j1 = way[static_cast<Index>(j0)];
            col_owner[static_cast<Index>(j0)] = col_owner[static_cast<Index>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    for (long j = 1; j <= n; ++j) {
        const long r = col_owner[static_cast<Index>(j)] - 1;
        if (r >= 0 && r < rows && j - 1 < cols) {
            out.row_to_col[static_cast<Index>(r)] = j - 1;
            out.total_cost += cost(r, j - 1);
        }
    }
    return out;
}

Assignment hungarian_max(const Matrix& profit) {
    if (profit.size() == 0) return hungarian_min(profit);
    const double top = profit.maxCoeff();
    Assignment a = hungarian_min((top - profit.array()).matrix());
    a.total_cost = 0.0;
    for (Index r = 0; r < a.row_to_col.size(); ++r)
        if (a.row_to_col[r] >= 0) a.total_cost += profit(static_cast<Eigen::Index>(r), a.row_to_col[r]);
    return a;
}

}  // namespace er
