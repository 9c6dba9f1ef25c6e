#pragma once

#include "essreg/core.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace er {

struct PureVarConfig {
    double delta = 0.0;
    std::optional<std::vector<double>> delta_grid;  // strictly increasing when present
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Greedy pure-variable search: for each i (ascending), the candidate set is
// every l != i whose |sigma_il| is within 2*delta of the row maximum; i is
// pure when every candidate's own row maximum agrees with |sigma_il| to 2*delta.
// Only off-diagonal entries are read.
PurePartition pure_var(const Matrix& sigma_hat, double delta);

// Replaces the first group that intersects `group` by the intersection, or
// appends `group` when none does.
std::vector<IndexSet> merge(const IndexSet& group, std::vector<IndexSet> collection);

struct CvRecord {
    double delta = 0.0;
    Index k_hat = 0;
    double cv_score = std::numeric_limits<double>::infinity();
};

struct CvReport {
    std::vector<CvRecord> records;
    double chosen_delta = 0.0;
    Index chosen_index = 0;
};

// Off-diagonal Frobenius discrepancy between `sigma_eval` restricted to the
// pure set and the fitted A_I Sigma_Z A_I^T from `sigma_fit`, scaled by
// 1/sqrt(|I|(|I|-1)). +inf when the partition cannot be fitted.
double cv_score(const Matrix& sigma_eval, const Matrix& sigma_fit, const PurePartition& partition);

// Scores every grid point (pure_var on sigma_fit) and picks the minimiser,
// ties going to the smaller delta.
CvReport cv_select_delta(const Matrix& sigma_eval, const Matrix& sigma_fit,
                         const std::vector<double>& grid);

// Random half/half row split under rng_seed; the first half (extra row for
// odd n) gives the evaluation covariance, the second the fit.
CvReport cv_select_delta(const Dataset& dataset, const std::vector<double>& grid,
                         std::uint64_t rng_seed);

// Best-scoring grid point whose partition on `sigma_full` has no group
// smaller than 2; the CV delta tuned on half the rows can be too coarse for
// the full sample. Throws AllGridFailed.
double usable_delta(const CvReport& report, const Matrix& sigma_full);

// 30 log-spaced multipliers in [0.05, 3] times sqrt(log(max(p, n)) / n).
std::vector<double> default_delta_grid(Index n, Index p, Index points = 30,
                                       double c_min = 0.05, double c_max = 3.0);

}  // namespace er
