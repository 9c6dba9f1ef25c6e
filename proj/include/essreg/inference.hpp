#pragma once

#include "essreg/core.hpp"
#include "essreg/estimation.hpp"

#include <vector>

namespace er {

struct ClippedScalar {
    double value = 0.0;
    bool clipped = false;
};

// sigma^2 = n^{-1} y^T y - 2 beta^T h + beta^T Sigma_Z beta, clipped at 0.
ClippedScalar estimate_sigma_sq(const CovarianceSummary& cov, const PurePartition& partition,
                                const PureLoadings& a_pure, const Matrix& sigma_z_hat,
                                const Vector& beta_hat);
ClippedScalar estimate_sigma_sq(const Dataset& dataset, const PurePartition& partition,
                                const PureLoadings& a_pure, const Matrix& sigma_z_hat,
                                const Vector& beta_hat);

struct VarianceInputs {
    Matrix theta_hat;    // p x K
    Matrix sigma_z_hat;  // K x K
    Matrix omega_hat;    // Sigma_Z^{-1}
    Vector beta_hat;     // K
    Vector tau_sq_hat;   // p
    double sigma_sq_hat = 0.0;
    PurePartition partition;
    double ridge_t = 0.0;  // added to Theta^T Theta, as in the point estimate

    // Fills omega_hat; throws SingularSigmaZ.
    static VarianceInputs make(Matrix theta_hat, Matrix sigma_z_hat, Vector beta_hat,
                               Vector tau_sq_hat, double sigma_sq_hat, PurePartition partition,
                               double ridge_t = 0.0);
    static VarianceInputs from_fit(const EssentialFit& fit, EstimatorKind kind = EstimatorKind::Main);

    Index k() const { return static_cast<Index>(beta_hat.size()); }
    // Throws GroupTooSmall(a) if some group has fewer than 2 members.
    void require_pairs() const;
};

// Heterogeneous-Gamma variance of sqrt(n)(beta_k - beta_k), every tau_i^2 plugged in as is.
double variance_vk_general(const VarianceInputs& inputs, Index k);

enum class SimplifiedMode { Full, LargeSignal };

// Homogeneous forms. Group sizes and the tau_i^2 must agree within 10%
// relative spread, else HeterogeneousInputs.
double variance_vk_simplified(const VarianceInputs& inputs, Index k, SimplifiedMode mode = SimplifiedMode::Full);

enum class HomogeneityGate { Enforce, Pool };

// Variance of the I-based estimator. With HomogeneityGate::Pool the scalar
// tau^2 and m are the averages even when the inputs are heterogeneous.
double variance_uk(const VarianceInputs& inputs, Index k, HomogeneityGate gate = HomogeneityGate::Enforce);

struct HomogeneousSummary {
    double tau_sq = 0.0;  // mean of tau_i^2 over all p coordinates
    double m = 0.0;       // mean group size
    double tau_spread = 0.0;
    double m_spread = 0.0;
};
HomogeneousSummary homogeneous_summary(const VarianceInputs& inputs);

// Standard normal quantile.
double normal_quantile(double prob);

InferenceReport confidence_interval(double beta_hat_k, double variance, Index n, double level,
                                    Index coordinate = 0,
                                    VarianceFormula formula = VarianceFormula::General);

// One report per coordinate. IBased uses variance_uk (gate enforced).
std::vector<InferenceReport> infer_all(const VarianceInputs& inputs, Index n, double level,
                                       VarianceFormula formula);

}  // namespace er
