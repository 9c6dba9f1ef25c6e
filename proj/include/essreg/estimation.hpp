#pragma once

#include "essreg/core.hpp"

#include <cstdint>

namespace er {

enum class AnchorRule { FirstIndex, SeededRandom };

// How the A-based competitor estimates Gamma: the diagonal tau_i^2 plug-ins,
// or the full residual Sigma - A Sigma_Z A^T (which makes it coincide with
// Sigma_Z^{-1} (A^T A)^{-1} A^T Sigma_xy).
enum class ABasedGamma { Diagonal, FullResidual };

struct EstimationConfig {
    double ridge_t = 0.0;           // 0 selects the automatic ridge when needed
    double cond_threshold = 1e10;
    double dantzig_c = 0.5;
    AnchorRule anchor_rule = AnchorRule::FirstIndex;
    std::uint64_t rng_seed = 0;
    ABasedGamma a_based_gamma = ABasedGamma::Diagonal;

    void validate() const;
};

// Loadings of the pure rows. Each row of `values` is +-e_k; rows follow
// `rows`, which is the ascending pure set.
struct PureLoadings {
    IndexSet rows;
    Matrix values;  // |rows| x K

    // Sign of pure variable `i` on its factor; 0 when i is not pure.
    double sign_of(Index i) const;
    // Row position of pure variable `i` in `rows`.
    Index position_of(Index i) const;
};

PureLoadings estimate_a_pure(const Matrix& sigma_hat, const PurePartition& partition,
                             AnchorRule anchor_rule = AnchorRule::FirstIndex,
                             std::uint64_t rng_seed = 0);

Matrix estimate_sigma_z(const Matrix& sigma_hat, const PurePartition& partition,
                        const PureLoadings& a_pure);

struct ClippedVector {
    Vector values;
    Index clipped = 0;
};

// Gamma_ii = Sigma_ii - A_i. Sigma_Z A_i. over the pure set (order of a_pure.rows), clipped at 0.
ClippedVector estimate_gamma_pure(const Matrix& sigma_hat, const Matrix& sigma_z_hat,
                                  const PureLoadings& a_pure, const PurePartition& partition);

// (Sigma_.I - Gamma_.I) A_I (A_I^T A_I)^{-1}; p x K.
Matrix estimate_theta(const Matrix& sigma_hat, const Vector& gamma_pure,
                      const PureLoadings& a_pure, const PurePartition& partition);

struct BetaEstimate {
    Vector beta;
    double ridge_t = 0.0;  // ridge actually added to Theta^T Theta
};

BetaEstimate estimate_beta(const Matrix& theta_hat, const Vector& sigma_xy_hat,
                           const EstimationConfig& config = {});

// Radius c * sqrt(log(max(p, n)) / n) used by the l1 loading estimator.
double dantzig_radius(double c, Index n, Index p);

// Full p x K loading matrix: pure rows from a_pure, every other row the
// l1-minimal solution of ||Sigma_Z b - (A_I^T A_I)^{-1} A_I^T Sigma_Ij||_inf <= radius.
Matrix estimate_a_nonpure_dantzig(const Matrix& sigma_z_hat, const Matrix& sigma_hat,
                                  const PurePartition& partition, const PureLoadings& a_pure,
                                  double c, Index n, Index p);

// Same, with an explicit radius (0 allowed for exact systems).
Matrix estimate_a_full(const Matrix& sigma_z_hat, const Matrix& sigma_hat,
                       const PurePartition& partition, const PureLoadings& a_pure, double radius);

// tau_i^2 = Sigma_ii - A_i. Sigma_Z A_i. for every i, clipped at 0.
ClippedVector estimate_tau_sq(const Matrix& sigma_hat, const Matrix& a_full, const Matrix& sigma_z_hat);

Vector estimate_beta_a(const Matrix& a_full, const Matrix& sigma_hat, const Vector& gamma_full,
                       const Vector& sigma_xy_hat);

// Sigma_Z^{-1} (A^T A)^{-1} A^T Sigma_xy, equal to estimate_beta_a with the full residual Gamma.
Vector estimate_beta_a_tilde(const Matrix& a_full, const Matrix& sigma_z_hat, const Vector& sigma_xy_hat);

// h = (A_I^T A_I)^{-1} A_I^T Sigma_{I,y}; the group-averaged signed covariances with y.
Vector estimate_h(const Vector& sigma_xy_hat, const PureLoadings& a_pure, const PurePartition& partition);

Vector estimate_beta_i(const Matrix& sigma_z_hat, const PureLoadings& a_pure,
                       const PurePartition& partition, const Vector& sigma_xy_hat);

// OLS of y on X A (A^T A)^{-1}.
Vector estimate_beta_naive(const Dataset& dataset, const Matrix& a_full);

// (Z^T Z)^{-1} Z^T y.
Vector estimate_beta_oracle(const Matrix& z_true, const Vector& y);

// X Theta (Theta^T Sigma Theta)^{-1} Theta^T Theta.
Matrix predict_z_blp(const Dataset& dataset, const Matrix& theta_hat, const Matrix& sigma_hat);

// Least squares y on z with a rank check; throws SingularGram.
Vector ols(const Matrix& z, const Vector& y);

// Everything the pipeline produces from one covariance summary.
struct EssentialFit {
    PurePartition partition;
    PureLoadings a_pure;
    Matrix sigma_z_hat;
    Matrix a_hat;        // full p x K
    Vector gamma_pure;   // over a_pure.rows
    Vector tau_sq_hat;   // all p
    Matrix theta_hat;
    BetaEstimate beta;
    Vector beta_i;
    Vector beta_a;
    ClipCounts clips;
    double sigma_sq_hat = 0.0;    // plug-in with beta
    double sigma_sq_hat_i = 0.0;  // plug-in with beta_i
    double delta = 0.0;
    Index n = 0;

    FittedModel model(EstimatorKind kind = EstimatorKind::Main) const;
};

struct FitOptions {
    EstimationConfig estimation;
    bool with_competitors = true;  // A-based and I-based estimates
    // Radius override for the loading LP; negative means dantzig_radius(c, n, p).
    double dantzig_radius = -1.0;
};

// Steps (1)-(4) and the plug-ins that inference needs, from Sigma-hat and
// n^{-1} X^T y alone. Throws EmptyPartition / GroupTooSmall / ZeroCovariance.
EssentialFit fit_from_covariance(const CovarianceSummary& cov, double delta, const FitOptions& options = {});

// Convenience: partition already known.
EssentialFit fit_with_partition(const CovarianceSummary& cov, const PurePartition& partition,
                                const FitOptions& options = {});

}  // namespace er
