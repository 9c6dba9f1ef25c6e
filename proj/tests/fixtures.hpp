#pragma once

#include "essreg/core.hpp"
#include "essreg/simulation.hpp"

#include <algorithm>
#include <random>

namespace fx {

using er::Matrix;
using er::Vector;

// Two factors, rows e1, e1, e2, e2, (0.5, 0.5).
inline er::SimulationTruth toy5(double gamma = 0.1, double sigma_sq = 0.25) {
    er::SimulationTruth t;
    t.a_true = Matrix(5, 2);
    t.a_true << 1, 0, 1, 0, 0, 1, 0, 1, 0.5, 0.5;
    t.sigma_z_true = Matrix(2, 2);
    t.sigma_z_true << 1, 0.2, 0.2, 1;
    t.gamma_true = Vector::Constant(5, gamma);
    t.beta_true = Vector(2);
    t.beta_true << 1, -2;
    t.sigma_sq_true = sigma_sq;
    t.partition_true.groups = {{0, 1}, {2, 3}};
    return t;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
    return m;
}

// A truth satisfying the pure-variable assumption with strict separation:
// K factors with m pure rows each (random signs), the remaining rows with
// |A_jk| <= 0.8 and l1 <= 1, Sigma_Z strictly diagonally dominant.
inline er::SimulationTruth random_truth(std::mt19937_64& rng, Eigen::Index k, Eigen::Index m, Eigen::Index p) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    er::SimulationTruth t;
    t.a_true = Matrix::Zero(p, k);
    t.partition_true.groups.assign(static_cast<er::Index>(k), {});
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index r = 0; r < m; ++r) {
            const Eigen::Index row = a * m + r;
            t.a_true(row, a) = u(rng) < 0.5 ? -1.0 : 1.0;
            t.partition_true.groups[static_cast<er::Index>(a)].push_back(static_cast<er::Index>(row));
        }
    for (Eigen::Index j = k * m; j < p; ++j) {
        Vector v(k);
        for (Eigen::Index a = 0; a < k; ++a) v(a) = (u(rng) < 0.5 ? -1.0 : 1.0) * u(rng);
        v /= std::max(1.0, v.cwiseAbs().sum());
        for (Eigen::Index a = 0; a < k; ++a) v(a) = std::clamp(v(a), -0.8, 0.8);
        t.a_true.row(j) = v.transpose();
    }
    Matrix s(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) s(a, b) = s(b, a) = a == b ? 0.0 : (u(rng) - 0.5) * 0.6 / static_cast<double>(k);
    for (Eigen::Index a = 0; a < k; ++a) s(a, a) = 1.0 + u(rng);
    t.sigma_z_true = s;
    t.gamma_true = Vector(p);
    for (Eigen::Index j = 0; j < p; ++j) t.gamma_true(j) = 0.5 + u(rng);
    t.beta_true = Vector(k);
    for (Eigen::Index a = 0; a < k; ++a) t.beta_true(a) = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 2.0 * u(rng));
    t.sigma_sq_true = 0.5;
    return t;
}

}  // namespace fx
