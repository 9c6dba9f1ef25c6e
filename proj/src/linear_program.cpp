#include "essreg/linear_program.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace er {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr Index kMaxIterations = 100000;

struct Tableau {
    Matrix t;                 // (m + 1) x (cols + 1); last row = reduced costs, last col = rhs
    std::vector<Index> basis;
    Index cols = 0;

    Index m() const { return basis.size(); }
    double& rhs(Index i) { return t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols)); }

    void pivot(Index row, Index col) {
        const auto r = static_cast<Eigen::Index>(row);
        const auto c = static_cast<Eigen::Index>(col);
        t.row(r) /= t(r, c);
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            if (i == r) continue;
            const double f = t(i, c);
            if (f != 0.0) t.row(i) -= f * t.row(r);
        }
        basis[row] = col;
    }

    // Loads reduced costs for `cost` (size cols) into the last row.
    void load_costs(const Vector& cost) {
        const auto obj = static_cast<Eigen::Index>(m());
        t.row(obj).setZero();
        t.row(obj).head(static_cast<Eigen::Index>(cols)) = cost.transpose();
        for (Index i = 0; i < m(); ++i) {
            const double cb = cost(static_cast<Eigen::Index>(basis[i]));
            if (cb != 0.0) t.row(obj) -= cb * t.row(static_cast<Eigen::Index>(i));
        }
    }

    // Runs Bland-rule simplex over columns [0, allowed). Returns false when unbounded.
    bool run(Index allowed, Index& iterations) {
        const auto obj = static_cast<Eigen::Index>(m());
        while (iterations < kMaxIterations) {
            Index enter = cols;
            for (Index j = 0; j < allowed; ++j) {
                if (t(obj, static_cast<Eigen::Index>(j)) < -kCostTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols) return true;

            Index leave = m();
            double best = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m(); ++i) {
                const double aij = t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(enter));
                if (aij <= kPivotTol) continue;
                const double ratio = rhs(i) / aij;
                if (ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 && leave < m() && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m()) return false;
            pivot(leave, enter);
            ++iterations;
        }
        return true;
    }
};

}  // namespace

LpResult solve_lp(const Vector& c, const Matrix& a, const Vector& b) {
    const Index m = static_cast<Index>(a.rows());
    const Index nv = static_cast<Index>(a.cols());
    if (c.size() != a.cols() || b.size() != a.rows())
        throw Error(ErrorCode::InvalidArgument, "solve_lp: dimension mismatch");

    Index n_art = 0;
    for (Index i = 0; i < m; ++i)
        if (b(static_cast<Eigen::Index>(i)) < 0.0) ++n_art;

    Tableau tab;
    tab.cols = nv + m + n_art;
    tab.t = Matrix::Zero(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(tab.cols + 1));
    tab.basis.assign(m, 0);

    Index art = 0;
    for (Index i = 0; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double sign = b(r) < 0.0 ? -1.0 : 1.0;
        tab.t.row(r).head(static_cast<Eigen::Index>(nv)) = sign * a.row(r);
        tab.t(r, static_cast<Eigen::Index>(nv + i)) = sign;
        tab.rhs(i) = sign * b(r);
        if (sign < 0.0) {
            const Index col = nv + m + art++;
            tab.t(r, static_cast<Eigen::Index>(col)) = 1.0;
            tab.basis[i] = col;
        } else {
            tab.basis[i] = nv + i;
        }
    }

    LpResult result;
    const Index structural = nv + m;

    if (n_art > 0) {
        Vector phase1 = Vector::Zero(static_cast<Eigen::Index>(tab.cols));
        phase1.tail(static_cast<Eigen::Index>(n_art)).setOnes();
        tab.load_costs(phase1);
        tab.run(tab.cols, result.iterations);
        const double infeasibility = -tab.t(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(tab.cols));
        const double scale = 1.0 + b.cwiseAbs().maxCoeff();
        if (infeasibility > 1e-9 * scale) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Drive zero-level artificials out of the basis where possible.
        for (Index i = 0; i < m; ++i) {
            if (tab.basis[i] < structural) continue;
            for (Index j = 0; j < structural; ++j) {
                if (std::abs(tab.t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > kPivotTol) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    Vector phase2 = Vector::Zero(static_cast<Eigen::Index>(tab.cols));
    phase2.head(static_cast<Eigen::Index>(nv)) = c;
    tab.load_costs(phase2);
    if (!tab.run(structural, result.iterations)) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x = Vector::Zero(static_cast<Eigen::Index>(nv));
    for (Index i = 0; i < m; ++i)
        if (tab.basis[i] < nv)
            result.x(static_cast<Eigen::Index>(tab.basis[i])) = std::max(0.0, tab.rhs(i));
    result.objective = c.dot(result.x);
    return result;
}

Vector l1_min_sup_constraint(const Matrix& s, const Vector& target, double radius) {
    const Eigen::Index k = s.rows();
    if (s.cols() != k || target.size() != k)
        throw Error(ErrorCode::InvalidArgument, "l1_min_sup_constraint: dimension mismatch");
    if (radius < 0.0)
        throw Error(ErrorCode::InvalidArgument, "l1_min_sup_constraint: negative radius");

    // Rows:  S(u - w) <= target + r  and  -S(u - w) <= r - target.
    Matrix a(2 * k, 2 * k);
    a << s, -s, -s, s;
    Vector b(2 * k);
    b << target.array() + radius, radius - target.array();
    const Vector c = Vector::Ones(2 * k);

    const LpResult lp = solve_lp(c, a, b);
    if (lp.status == LpStatus::Infeasible)
        throw Error(ErrorCode::LpInfeasible, "l1-minimal loading row has an empty feasible set");
    if (lp.status == LpStatus::Unbounded)
        throw Error(ErrorCode::LpUnbounded, "l1-minimal loading row is unbounded");
    return lp.x.head(k) - lp.x.tail(k);
}

}  // namespace er
