#pragma once

#include "essreg/core.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using er::Matrix;
using er::Vector;

// Smallest l1 norm over the vertices of {v : |S v - t| <= r} cut by each orthant.
inline double vertex_min_l1(const Matrix& s, const Vector& t, double r) {
    const int k = static_cast<int>(s.rows());
    Matrix g(3 * k, k);
    Vector h(3 * k);
    g.topRows(k) = s;
    h.head(k) = t.array() + r;
    g.middleRows(k, k) = -s;
    h.segment(k, k) = r - t.array();
    double best = std::numeric_limits<double>::infinity();
    for (int signs = 0; signs < (1 << k); ++signs) {
        for (int i = 0; i < k; ++i) {
            g.row(2 * k + i).setZero();
            g(2 * k + i, i) = (signs >> i & 1) ? 1.0 : -1.0;
            h(2 * k + i) = 0.0;
        }
        const int rows = 3 * k;
        std::vector<int> pick(k);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            Matrix m(k, k);
            Vector b(k);
            for (int i = 0; i < k; ++i) {
                m.row(i) = g.row(pick[i]);
                b(i) = h(pick[i]);
            }
            Eigen::FullPivLU<Matrix> lu(m);
            if (lu.isInvertible()) {
                const Vector v = lu.solve(b);
                if (((g * v - h).array() <= 1e-9).all()) best = std::min(best, v.cwiseAbs().sum());
            }
            int i = k - 1;
            while (i >= 0 && pick[i] == rows - k + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return best;
}

// min over all K! 2^K signed permutations.
inline double signed_perm_min(const Vector& bh, const Vector& b) {
    const int k = static_cast<int>(b.size());
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        for (int s = 0; s < (1 << k); ++s) {
            double sum = 0.0;
            for (int i = 0; i < k; ++i) {
                const double d = bh(i) - ((s >> i & 1) ? -1.0 : 1.0) * b(perm[i]);
                sum += d * d;
            }
            best = std::min(best, std::sqrt(sum));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Every partition of `items` into blocks of size >= 2.
inline void partitions_min2(const std::vector<er::Index>& items, std::vector<er::IndexSet>& current,
                            std::vector<std::vector<er::IndexSet>>& out, std::size_t next = 0) {
    if (next == items.size()) {
        for (const auto& b : current)
            if (b.size() < 2) return;
        out.push_back(current);
        return;
    }
    for (auto& b : current) {
        b.push_back(items[next]);
        partitions_min2(items, current, out, next + 1);
        b.pop_back();
    }
    current.push_back({items[next]});
    partitions_min2(items, current, out, next + 1);
    current.pop_back();
}

}  // namespace oracle
