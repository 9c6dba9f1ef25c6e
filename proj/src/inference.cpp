#include "essreg/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace er {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

constexpr double kHomogeneityTolerance = 0.10;

double relative_spread(double lo, double hi, double mean) {
    if (mean == 0.0) return hi == lo ? 0.0 : std::numeric_limits<double>::infinity();
    return (hi - lo) / std::abs(mean);
}

void check_coordinate(const VarianceInputs& in, Index k) {
    if (k >= in.k())
        throw Error(ErrorCode::InvalidArgument,
                    "coordinate " + std::to_string(k) + " out of range (K = " + std::to_string(in.k()) + ")");
}

// Row k of (Theta^T Theta + tI)^{-1} and of Theta^+ = (Theta^T Theta + tI)^{-1} Theta^T.
struct ThetaPinvRow {
    Vector gram_inv_row;
    Vector pinv_row;
};

ThetaPinvRow theta_pinv_row(const VarianceInputs& in, Index k) {
    Matrix gram = in.theta_hat.transpose() * in.theta_hat;
    gram.diagonal().array() += in.ridge_t;
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        throw Error(ErrorCode::SingularAfterRidge, "Theta^T Theta is singular");
    Vector e = Vector::Zero(gram.rows());
    e(ei(k)) = 1.0;
    ThetaPinvRow out;
    out.gram_inv_row = ldlt.solve(e);
    out.pinv_row = in.theta_hat * out.gram_inv_row;
    return out;
}

HomogeneousSummary gate(const VarianceInputs& in, HomogeneityGate mode) {
    const HomogeneousSummary h = homogeneous_summary(in);
    if (mode == HomogeneityGate::Enforce &&
        (h.tau_spread > kHomogeneityTolerance || h.m_spread > kHomogeneityTolerance))
        throw Error(ErrorCode::HeterogeneousInputs,
                    "group sizes or tau^2 spread more than 10%; use the general formula");
    return h;
}

}  // namespace

ClippedScalar estimate_sigma_sq(const CovarianceSummary& cov, const PurePartition& partition,
                                const PureLoadings& a_pure, const Matrix& sigma_z_hat, const Vector& beta_hat) {
    const Vector h = estimate_h(cov.sigma_xy_hat, a_pure, partition);
    const double s2 = cov.yy_hat - 2.0 * beta_hat.dot(h) + beta_hat.dot(sigma_z_hat * beta_hat);
    if (s2 < 0.0) return {0.0, true};
    return {s2, false};
}

ClippedScalar estimate_sigma_sq(const Dataset& dataset, const PurePartition& partition, const PureLoadings& a_pure,
                                const Matrix& sigma_z_hat, const Vector& beta_hat) {
    CovarianceSummary cov;
    const double n = static_cast<double>(dataset.n());
    cov.n = dataset.n();
    cov.sigma_xy_hat = dataset.x.transpose() * dataset.y / n;
    cov.yy_hat = dataset.y.squaredNorm() / n;
    return estimate_sigma_sq(cov, partition, a_pure, sigma_z_hat, beta_hat);
}

VarianceInputs VarianceInputs::make(Matrix theta_hat, Matrix sigma_z_hat, Vector beta_hat, Vector tau_sq_hat,
                                    double sigma_sq_hat, PurePartition partition, double ridge_t) {
    VarianceInputs in;
    in.theta_hat = std::move(theta_hat);
    in.sigma_z_hat = std::move(sigma_z_hat);
    in.beta_hat = std::move(beta_hat);
    in.tau_sq_hat = std::move(tau_sq_hat);
    in.sigma_sq_hat = sigma_sq_hat;
    in.partition = std::move(partition);
    in.ridge_t = ridge_t;

    const Eigen::Index k = in.sigma_z_hat.rows();
    if (in.sigma_z_hat.cols() != k || in.beta_hat.size() != k || in.theta_hat.cols() != k ||
        in.tau_sq_hat.size() != in.theta_hat.rows() || static_cast<Index>(k) != in.partition.k_hat())
        throw Error(ErrorCode::InvalidArgument, "variance inputs have inconsistent dimensions");
    Eigen::FullPivLU<Matrix> lu(in.sigma_z_hat);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularSigmaZ, "Sigma_Z is singular");
    in.omega_hat = lu.inverse();
    return in;
}

VarianceInputs VarianceInputs::from_fit(const EssentialFit& fit, EstimatorKind kind) {
    const FittedModel m = fit.model(kind);
    return make(m.theta_hat, m.sigma_z_hat, m.beta_hat, m.tau_sq_hat, m.sigma_sq_hat, m.partition, m.ridge_t);
}

void VarianceInputs::require_pairs() const {
    for (Index a = 0; a < partition.k_hat(); ++a)
        if (partition.groups[a].size() < 2)
            throw Error(ErrorCode::GroupTooSmall, "group " + std::to_string(a) + " has fewer than 2 members");
}

HomogeneousSummary homogeneous_summary(const VarianceInputs& in) {
    HomogeneousSummary h;
    h.tau_sq = in.tau_sq_hat.mean();
    h.tau_spread = relative_spread(in.tau_sq_hat.minCoeff(), in.tau_sq_hat.maxCoeff(), h.tau_sq);
    const auto sizes = in.partition.group_sizes();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (Index s : sizes) {
        lo = std::min(lo, static_cast<double>(s));
        hi = std::max(hi, static_cast<double>(s));
        sum += static_cast<double>(s);
    }
    h.m = sum / static_cast<double>(sizes.size());
    h.m_spread = relative_spread(lo, hi, h.m);
    return h;
}

double variance_vk_general(const VarianceInputs& in, Index k) {
    check_coordinate(in, k);
    in.require_pairs();
    const ThetaPinvRow row = theta_pinv_row(in, k);
    const Vector& r = row.pinv_row;

    double first = in.sigma_sq_hat;
    double third = 0.0;
    for (Index l = 0; l < in.partition.k_hat(); ++l) {
        const IndexSet& group = in.partition.groups[l];
        const double m = static_cast<double>(group.size());
        const double b2 = in.beta_hat(ei(l)) * in.beta_hat(ei(l));
        double tau_sum = 0.0;
        double r_sq = 0.0;
        for (Index i : group) {
            tau_sum += in.tau_sq_hat(ei(i));
            r_sq += r(ei(i)) * r(ei(i));
        }
        first += b2 * tau_sum / (m * m);

        double correction = 0.0;
        for (Index i : group) {
            const double ti = in.tau_sq_hat(ei(i));
            correction += ti * ((tau_sum - ti) / ((m - 1.0) * (m - 1.0)) - tau_sum / (m * m));
        }
        third += r_sq * b2 / m * correction;
    }
    const double second = in.omega_hat(ei(k), ei(k)) + (r.array().square() * in.tau_sq_hat.array()).sum();
    return first * second + third;
}

double variance_vk_simplified(const VarianceInputs& in, Index k, SimplifiedMode mode) {
    check_coordinate(in, k);
    in.require_pairs();
    const HomogeneousSummary h = gate(in, HomogeneityGate::Enforce);
    const double lead = in.sigma_sq_hat + h.tau_sq * in.beta_hat.squaredNorm() / h.m;
    if (mode == SimplifiedMode::LargeSignal) return lead * in.omega_hat(ei(k), ei(k));

    const ThetaPinvRow row = theta_pinv_row(in, k);
    double minor = 0.0;
    for (Index a = 0; a < in.partition.k_hat(); ++a) {
        double r_sq = 0.0;
        for (Index i : in.partition.groups[a]) r_sq += row.pinv_row(ei(i)) * row.pinv_row(ei(i));
        minor += in.beta_hat(ei(a)) * in.beta_hat(ei(a)) * r_sq;
    }
    return lead * (in.omega_hat(ei(k), ei(k)) + h.tau_sq * row.gram_inv_row(ei(k))) +
           h.tau_sq * h.tau_sq / (h.m * (h.m - 1.0)) * minor;
}

double variance_uk(const VarianceInputs& in, Index k, HomogeneityGate mode) {
    check_coordinate(in, k);
    in.require_pairs();
    const HomogeneousSummary h = gate(in, mode);
    const double lead = in.sigma_sq_hat + h.tau_sq * in.beta_hat.squaredNorm() / h.m;
    const auto omega_row = in.omega_hat.row(ei(k));
    const double tail = (in.beta_hat.array().square() * omega_row.transpose().array().square()).sum();
    return lead * (in.omega_hat(ei(k), ei(k)) + h.tau_sq * omega_row.squaredNorm() / h.m) +
           h.tau_sq * h.tau_sq / (h.m * h.m * (h.m - 1.0)) * tail;
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw Error(ErrorCode::InvalidArgument, "normal_quantile needs a probability in (0, 1)");
    // Rational approximation (relative error ~1e-9), then one Halley step on erfc.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (prob < p_low) {
        const double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - p_low) {
        const double q = prob - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

InferenceReport confidence_interval(double beta_hat_k, double variance, Index n, double level, Index coordinate,
                                    VarianceFormula formula) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw Error(ErrorCode::NonpositiveVariance, "variance must be positive and finite");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");

    InferenceReport rep;
    rep.coordinate = coordinate;
    rep.estimate = beta_hat_k;
    rep.variance = variance;
    rep.level = level;
    rep.variance_formula = formula;
    rep.std_error = std::sqrt(variance / static_cast<double>(n));
    rep.z_stat = beta_hat_k / rep.std_error;
    const double half = normal_quantile(0.5 * (1.0 + level)) * rep.std_error;
    rep.ci_lower = beta_hat_k - half;
    rep.ci_upper = beta_hat_k + half;
    return rep;
}

std::vector<InferenceReport> infer_all(const VarianceInputs& inputs, Index n, double level,
                                       VarianceFormula formula) {
    std::vector<InferenceReport> out;
    out.reserve(inputs.k());
    for (Index k = 0; k < inputs.k(); ++k) {
        double v = 0.0;
        switch (formula) {
        case VarianceFormula::General: v = variance_vk_general(inputs, k); break;
        case VarianceFormula::Simplified: v = variance_vk_simplified(inputs, k, SimplifiedMode::Full); break;
        case VarianceFormula::LargeSignal: v = variance_vk_simplified(inputs, k, SimplifiedMode::LargeSignal); break;
        case VarianceFormula::IBased: v = variance_uk(inputs, k, HomogeneityGate::Enforce); break;
        }
        out.push_back(confidence_interval(inputs.beta_hat(ei(k)), v, n, level, k, formula));
    }
    return out;
}

}  // namespace er
