#include "essreg/pure_variables.hpp"

#include "essreg/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>

namespace er {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

Dataset rows_subset(const Dataset& data, const std::vector<Index>& rows) {
    Matrix x(ei(rows.size()), data.x.cols());
    Vector y(ei(rows.size()));
    for (Index r = 0; r < rows.size(); ++r) {
        x.row(ei(r)) = data.x.row(ei(rows[r]));
        y(ei(r)) = data.y(ei(rows[r]));
    }
    Dataset out;
    out.x = std::move(x);
    out.y = std::move(y);
    return out;
}

}  // namespace

void PureVarConfig::validate() const {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be > 0");
    if (delta_grid) {
        if (delta_grid->empty()) throw Error(ErrorCode::InvalidArgument, "delta grid is empty");
        for (Index i = 0; i < delta_grid->size(); ++i) {
            if (!((*delta_grid)[i] > 0.0))
                throw Error(ErrorCode::InvalidArgument, "delta grid values must be > 0");
            if (i > 0 && !((*delta_grid)[i] > (*delta_grid)[i - 1]))
                throw Error(ErrorCode::InvalidArgument, "delta grid must be strictly increasing");
        }
    }
}

std::vector<IndexSet> merge(const IndexSet& group, std::vector<IndexSet> collection) {
    if (group.empty()) throw Error(ErrorCode::InvalidArgument, "merge: empty group");
    IndexSet sorted_group = group;
    std::sort(sorted_group.begin(), sorted_group.end());
    for (IndexSet& g : collection) {
        IndexSet sorted_g = g;
        std::sort(sorted_g.begin(), sorted_g.end());
        IndexSet common;
        std::set_intersection(sorted_g.begin(), sorted_g.end(), sorted_group.begin(), sorted_group.end(),
                              std::back_inserter(common));
        if (!common.empty()) {
            g = std::move(common);
            return collection;
        }
    }
    collection.push_back(std::move(sorted_group));
    return collection;
}

PurePartition pure_var(const Matrix& sigma_hat, double delta) {
    const Eigen::Index p = sigma_hat.rows();
    if (sigma_hat.cols() != p || p < 2)
        throw Error(ErrorCode::InvalidArgument, "pure_var needs a square matrix with p >= 2");
    if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");

    const Matrix abs_sigma = sigma_hat.cwiseAbs();
    Vector row_max(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        double mx = 0.0;
        for (Eigen::Index j = 0; j < p; ++j)
            if (j != i) mx = std::max(mx, abs_sigma(i, j));
        row_max(i) = mx;
    }

    const double tol = 2.0 * delta;
    std::vector<IndexSet> collection;
    IndexSet candidates;
    for (Eigen::Index i = 0; i < p; ++i) {
        candidates.clear();
        for (Eigen::Index l = 0; l < p; ++l)
            if (l != i && row_max(i) <= abs_sigma(i, l) + tol) candidates.push_back(static_cast<Index>(l));

        bool pure = true;
        for (Index j : candidates) {
            if (std::abs(abs_sigma(i, ei(j)) - row_max(ei(j))) > tol) {
                pure = false;
                break;
            }
        }
        if (!pure) continue;
        candidates.push_back(static_cast<Index>(i));
        std::sort(candidates.begin(), candidates.end());
        collection = merge(candidates, std::move(collection));
    }

    if (collection.empty())
        throw Error(ErrorCode::EmptyPartition, "no variable was declared pure at delta = " + std::to_string(delta));
    return PurePartition{std::move(collection)};
}

double cv_score(const Matrix& sigma_eval, const Matrix& sigma_fit, const PurePartition& partition) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (partition.k_hat() == 0) return inf;
    for (const auto& g : partition.groups)
        if (g.size() < 2) return inf;

    PureLoadings a_pure;
    Matrix sigma_z;
    try {
        a_pure = estimate_a_pure(sigma_fit, partition);
        sigma_z = estimate_sigma_z(sigma_fit, partition, a_pure);
    } catch (const Error&) {
        return inf;
    }

    std::vector<Index> factor_of(a_pure.rows.size());
    for (Index k = 0; k < partition.k_hat(); ++k)
        for (Index i : partition.groups[k]) factor_of[a_pure.position_of(i)] = k;

    const Index m = a_pure.rows.size();
    double sum = 0.0;
    for (Index r = 0; r < m; ++r) {
        const Index i = a_pure.rows[r];
        const double si = a_pure.values(ei(r), ei(factor_of[r]));
        for (Index c = 0; c < m; ++c) {
            if (c == r) continue;
            const Index j = a_pure.rows[c];
            const double sj = a_pure.values(ei(c), ei(factor_of[c]));
            const double fitted = si * sj * sigma_z(ei(factor_of[r]), ei(factor_of[c]));
            const double d = sigma_eval(ei(i), ei(j)) - fitted;
            sum += d * d;
        }
    }
    return std::sqrt(sum) / std::sqrt(static_cast<double>(m) * static_cast<double>(m - 1));
}

CvReport cv_select_delta(const Matrix& sigma_eval, const Matrix& sigma_fit, const std::vector<double>& grid) {
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "delta grid is empty");
    CvReport report;
    report.records.reserve(grid.size());
    for (double delta : grid) {
        CvRecord rec;
        rec.delta = delta;
        try {
            const PurePartition part = pure_var(sigma_fit, delta);
            rec.k_hat = part.k_hat();
            rec.cv_score = cv_score(sigma_eval, sigma_fit, part);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyPartition) throw;
        }
        report.records.push_back(rec);
    }

    bool found = false;
    for (Index i = 0; i < report.records.size(); ++i) {
        const CvRecord& r = report.records[i];
        if (!std::isfinite(r.cv_score)) continue;
        const CvRecord& best = report.records[report.chosen_index];
        if (!found || r.cv_score < best.cv_score || (r.cv_score == best.cv_score && r.delta < best.delta)) {
            report.chosen_index = i;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::AllGridFailed, "every delta on the grid failed to produce a usable partition");
    report.chosen_delta = report.records[report.chosen_index].delta;
    return report;
}

CvReport cv_select_delta(const Dataset& dataset, const std::vector<double>& grid, std::uint64_t rng_seed) {
    const Index n = dataset.n();
    if (n < 4) throw Error(ErrorCode::InvalidArgument, "cross-validation needs n >= 4");
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(rng_seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const Index first = (n + 1) / 2;
    std::vector<Index> rows1(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(first));
    std::vector<Index> rows2(perm.begin() + static_cast<std::ptrdiff_t>(first), perm.end());

    const CovarianceSummary eval = sample_covariance(center(rows_subset(dataset, rows1)));
    const CovarianceSummary fit = sample_covariance(center(rows_subset(dataset, rows2)));
    return cv_select_delta(eval.sigma_hat, fit.sigma_hat, grid);
}

double usable_delta(const CvReport& report, const Matrix& sigma_full) {
    std::vector<Index> order(report.records.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return report.records[a].cv_score < report.records[b].cv_score;
    });
    for (Index i : order) {
        const CvRecord& r = report.records[i];
        if (!std::isfinite(r.cv_score)) break;
        try {
            const PurePartition part = pure_var(sigma_full, r.delta);
            const auto sizes = part.group_sizes();
            if (std::all_of(sizes.begin(), sizes.end(), [](Index s) { return s >= 2; })) return r.delta;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyPartition) throw;
        }
    }
    throw Error(ErrorCode::AllGridFailed, "no cross-validated delta gives a usable partition on the full sample");
}

std::vector<double> default_delta_grid(Index n, Index p, Index points, double c_min, double c_max) {
    if (points == 0 || !(c_min > 0.0) || !(c_max >= c_min))
        throw Error(ErrorCode::InvalidArgument, "invalid delta grid specification");
    const double rate = delta_default(static_cast<double>(n), static_cast<double>(p), 1.0);
    std::vector<double> grid(points);
    for (Index i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        grid[i] = std::exp(std::log(c_min) + t * (std::log(c_max) - std::log(c_min))) * rate;
    }
    return grid;
}

}  // namespace er
