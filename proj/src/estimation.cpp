#include "essreg/estimation.hpp"

#include "essreg/inference.hpp"
#include "essreg/linear_program.hpp"
#include "essreg/pure_variables.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace er {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

// Solves a small square system, throwing `code` when it is numerically singular.
Vector solve_checked(const Matrix& m, const Vector& rhs, ErrorCode code, const char* what) {
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw Error(code, std::string(what) + " is singular");
    return lu.solve(rhs);
}

Matrix inverse_checked(const Matrix& m, ErrorCode code, const char* what) {
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw Error(code, std::string(what) + " is singular");
    return lu.inverse();
}

}  // namespace

void EstimationConfig::validate() const {
    if (ridge_t < 0.0) throw Error(ErrorCode::InvalidArgument, "ridge_t must be >= 0");
    if (!(cond_threshold > 1.0)) throw Error(ErrorCode::InvalidArgument, "cond_threshold must be > 1");
    if (!(dantzig_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "dantzig_c must be > 0");
}

double PureLoadings::sign_of(Index i) const {
    const auto it = std::lower_bound(rows.begin(), rows.end(), i);
    if (it == rows.end() || *it != i) return 0.0;
    const auto r = ei(static_cast<Index>(it - rows.begin()));
    return values.row(r).sum();
}

Index PureLoadings::position_of(Index i) const {
    const auto it = std::lower_bound(rows.begin(), rows.end(), i);
    if (it == rows.end() || *it != i)
        throw Error(ErrorCode::InvalidArgument, "index " + std::to_string(i) + " is not pure");
    return static_cast<Index>(it - rows.begin());
}

PureLoadings estimate_a_pure(const Matrix& sigma_hat, const PurePartition& partition,
                             AnchorRule anchor_rule, std::uint64_t rng_seed) {
    const Index k_hat = partition.k_hat();
    PureLoadings out;
    out.rows = partition.pure_set();
    out.values = Matrix::Zero(ei(out.rows.size()), ei(k_hat));

    std::mt19937_64 rng(rng_seed);
    for (Index k = 0; k < k_hat; ++k) {
        const IndexSet& group = partition.groups[k];
        if (group.empty())
            throw Error(ErrorCode::InvariantViolation, "group " + std::to_string(k) + " is empty");
        Index anchor = group.front();
        if (anchor_rule == AnchorRule::SeededRandom) {
            std::uniform_int_distribution<Index> pick(0, group.size() - 1);
            anchor = group[pick(rng)];
        }
        for (Index j : group) {
            double sign = 1.0;
            if (j != anchor) {
                const double s = sigma_hat(ei(anchor), ei(j));
                if (s == 0.0)
                    throw Error(ErrorCode::ZeroCovariance, "covariance of pure pair (" + std::to_string(anchor) +
                                                               ", " + std::to_string(j) + ") is exactly 0");
                sign = s > 0.0 ? 1.0 : -1.0;
            }
            out.values(ei(out.position_of(j)), ei(k)) = sign;
        }
    }
    return out;
}

Matrix estimate_sigma_z(const Matrix& sigma_hat, const PurePartition& partition, const PureLoadings& a_pure) {
    const Index k_hat = partition.k_hat();
    Matrix sz = Matrix::Zero(ei(k_hat), ei(k_hat));
    for (Index a = 0; a < k_hat; ++a) {
        const IndexSet& ga = partition.groups[a];
        if (ga.size() < 2)
            throw Error(ErrorCode::GroupTooSmall,
                        "group " + std::to_string(a) + " has " + std::to_string(ga.size()) + " member(s); need >= 2");
        double sum = 0.0;
        for (Index i : ga)
            for (Index j : ga)
                if (i != j) sum += std::abs(sigma_hat(ei(i), ei(j)));
        const double m = static_cast<double>(ga.size());
        sz(ei(a), ei(a)) = sum / (m * (m - 1.0));
    }
    for (Index a = 0; a < k_hat; ++a) {
        const IndexSet& ga = partition.groups[a];
        for (Index b = a + 1; b < k_hat; ++b) {
            const IndexSet& gb = partition.groups[b];
            double sum = 0.0;
            for (Index i : ga)
                for (Index j : gb)
                    sum += a_pure.sign_of(i) * a_pure.sign_of(j) * sigma_hat(ei(i), ei(j));
            const double v = sum / static_cast<double>(ga.size() * gb.size());
            sz(ei(a), ei(b)) = v;
            sz(ei(b), ei(a)) = v;
        }
    }
    return sz;
}

ClippedVector estimate_gamma_pure(const Matrix& sigma_hat, const Matrix& sigma_z_hat,
                                  const PureLoadings& a_pure, const PurePartition& partition) {
    ClippedVector out;
    out.values = Vector::Zero(ei(a_pure.rows.size()));
    for (Index k = 0; k < partition.k_hat(); ++k) {
        for (Index i : partition.groups[k]) {
            const Index r = a_pure.position_of(i);
            const auto row = a_pure.values.row(ei(r));
            double g = sigma_hat(ei(i), ei(i)) - row.dot(sigma_z_hat * row.transpose());
            if (g < 0.0) {
                g = 0.0;
                ++out.clipped;
            }
            out.values(ei(r)) = g;
        }
    }
    return out;
}

Matrix estimate_theta(const Matrix& sigma_hat, const Vector& gamma_pure, const PureLoadings& a_pure,
                      const PurePartition& partition) {
    const Eigen::Index p = sigma_hat.rows();
    Matrix theta = Matrix::Zero(p, ei(partition.k_hat()));
    for (Index k = 0; k < partition.k_hat(); ++k) {
        const IndexSet& group = partition.groups[k];
        for (Index i : group) {
            const Index r = a_pure.position_of(i);
            const double s = a_pure.values(ei(r), ei(k));
            theta.col(ei(k)) += s * sigma_hat.col(ei(i));
            theta(ei(i), ei(k)) -= s * gamma_pure(ei(r));
        }
        theta.col(ei(k)) /= static_cast<double>(group.size());
    }
    return theta;
}

BetaEstimate estimate_beta(const Matrix& theta_hat, const Vector& sigma_xy_hat, const EstimationConfig& config) {
    const Eigen::Index k = theta_hat.cols();
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "Theta has no columns");
    const Matrix gram = theta_hat.transpose() * theta_hat;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const bool ill = !(lo > 0.0) || hi / lo > config.cond_threshold;

    BetaEstimate out;
    if (ill) out.ridge_t = config.ridge_t > 0.0 ? config.ridge_t : 1e-8 * gram.trace() / static_cast<double>(k);
    const double lo_t = lo + out.ridge_t;
    const double hi_t = hi + out.ridge_t;
    if (!(lo_t > 0.0) || hi_t / lo_t > 1e15)
        throw Error(ErrorCode::SingularAfterRidge, "Theta^T Theta + tI is numerically singular");

    Matrix m = gram;
    m.diagonal().array() += out.ridge_t;
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::SingularAfterRidge, "Theta^T Theta + tI is not positive definite");
    out.beta = llt.solve(theta_hat.transpose() * sigma_xy_hat);
    return out;
}

double dantzig_radius(double c, Index n, Index p) {
    return delta_default(static_cast<double>(n), static_cast<double>(p), c);
}

Matrix estimate_a_full(const Matrix& sigma_z_hat, const Matrix& sigma_hat, const PurePartition& partition,
                       const PureLoadings& a_pure, double radius) {
    const Eigen::Index p = sigma_hat.rows();
    const Index k_hat = partition.k_hat();
    Matrix a = Matrix::Zero(p, ei(k_hat));
    for (Index r = 0; r < a_pure.rows.size(); ++r) a.row(ei(a_pure.rows[r])) = a_pure.values.row(ei(r));

    std::vector<char> is_pure(static_cast<Index>(p), 0);
    for (Index i : a_pure.rows) is_pure[i] = 1;

    for (Eigen::Index j = 0; j < p; ++j) {
        if (is_pure[static_cast<Index>(j)]) continue;
        Vector target(ei(k_hat));
        for (Index k = 0; k < k_hat; ++k) {
            double sum = 0.0;
            for (Index i : partition.groups[k]) sum += a_pure.sign_of(i) * sigma_hat(ei(i), j);
            target(ei(k)) = sum / static_cast<double>(partition.groups[k].size());
        }
        try {
            a.row(j) = l1_min_sup_constraint(sigma_z_hat, target, radius).transpose();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::LpInfeasible)
                throw Error(ErrorCode::LpInfeasible, "loading row " + std::to_string(j) + " has no feasible point");
            throw;
        }
    }
    return a;
}

Matrix estimate_a_nonpure_dantzig(const Matrix& sigma_z_hat, const Matrix& sigma_hat,
                                  const PurePartition& partition, const PureLoadings& a_pure,
                                  double c, Index n, Index p) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "Dantzig constant must be > 0");
    return estimate_a_full(sigma_z_hat, sigma_hat, partition, a_pure, dantzig_radius(c, n, p));
}

ClippedVector estimate_tau_sq(const Matrix& sigma_hat, const Matrix& a_full, const Matrix& sigma_z_hat) {
    ClippedVector out;
    const Eigen::Index p = sigma_hat.rows();
    out.values.resize(p);
    const Matrix as = a_full * sigma_z_hat;
    for (Eigen::Index i = 0; i < p; ++i) {
        double t = sigma_hat(i, i) - as.row(i).dot(a_full.row(i));
        if (t < 0.0) {
            t = 0.0;
            ++out.clipped;
        }
        out.values(i) = t;
    }
    return out;
}

Vector estimate_beta_a(const Matrix& a_full, const Matrix& sigma_hat, const Vector& gamma_full,
                       const Vector& sigma_xy_hat) {
    const Matrix ata_inv = inverse_checked(a_full.transpose() * a_full, ErrorCode::SingularGram, "A^T A");
    const Matrix b = a_full * ata_inv;
    const Matrix inner = b.transpose() * sigma_hat * b - b.transpose() * gamma_full.asDiagonal() * b;
    return solve_checked(inner, b.transpose() * sigma_xy_hat, ErrorCode::SingularInner,
                         "B^T (Sigma - Gamma) B");
}

Vector estimate_beta_a_tilde(const Matrix& a_full, const Matrix& sigma_z_hat, const Vector& sigma_xy_hat) {
    const Vector cov_zy = solve_checked(a_full.transpose() * a_full, a_full.transpose() * sigma_xy_hat,
                                        ErrorCode::SingularGram, "A^T A");
    return solve_checked(sigma_z_hat, cov_zy, ErrorCode::SingularSigmaZ, "Sigma_Z");
}

Vector estimate_h(const Vector& sigma_xy_hat, const PureLoadings& a_pure, const PurePartition& partition) {
    Vector h(ei(partition.k_hat()));
    for (Index k = 0; k < partition.k_hat(); ++k) {
        double sum = 0.0;
        for (Index i : partition.groups[k]) sum += a_pure.sign_of(i) * sigma_xy_hat(ei(i));
        h(ei(k)) = sum / static_cast<double>(partition.groups[k].size());
    }
    return h;
}

Vector estimate_beta_i(const Matrix& sigma_z_hat, const PureLoadings& a_pure, const PurePartition& partition,
                       const Vector& sigma_xy_hat) {
    return solve_checked(sigma_z_hat, estimate_h(sigma_xy_hat, a_pure, partition), ErrorCode::SingularSigmaZ,
                         "Sigma_Z");
}

Vector ols(const Matrix& z, const Vector& y) {
    if (z.rows() < z.cols())
        throw Error(ErrorCode::SingularGram, "fewer rows than regressors");
    Eigen::ColPivHouseholderQR<Matrix> qr(z);
    qr.setThreshold(1e-12);
    if (qr.rank() < z.cols()) throw Error(ErrorCode::SingularGram, "regressor Gram matrix is singular");
    return qr.solve(y);
}

Vector estimate_beta_naive(const Dataset& dataset, const Matrix& a_full) {
    const Matrix ata_inv = inverse_checked(a_full.transpose() * a_full, ErrorCode::SingularGram, "A^T A");
    const Matrix xbar = dataset.x * (a_full * ata_inv);
    return ols(xbar, dataset.y);
}

Vector estimate_beta_oracle(const Matrix& z_true, const Vector& y) { return ols(z_true, y); }

Matrix predict_z_blp(const Dataset& dataset, const Matrix& theta_hat, const Matrix& sigma_hat) {
    const Matrix middle = theta_hat.transpose() * sigma_hat * theta_hat;
    const Matrix middle_inv = inverse_checked(middle, ErrorCode::SingularMiddle, "Theta^T Sigma Theta");
    return dataset.x * theta_hat * middle_inv * (theta_hat.transpose() * theta_hat);
}

FittedModel EssentialFit::model(EstimatorKind kind) const {
    FittedModel m;
    m.a_hat = a_hat;
    m.sigma_z_hat = sigma_z_hat;
    m.gamma_hat = tau_sq_hat;
    m.theta_hat = theta_hat;
    m.tau_sq_hat = tau_sq_hat;
    m.partition = partition;
    m.estimator_kind = kind;
    m.ridge_t = beta.ridge_t;
    m.clip_counts = clips;
    m.delta = delta;
    m.n = n;
    switch (kind) {
    case EstimatorKind::Main:
        m.beta_hat = beta.beta;
        m.sigma_sq_hat = sigma_sq_hat;
        break;
    case EstimatorKind::IBased:
        if (beta_i.size() == 0) throw Error(ErrorCode::InvalidArgument, "I-based estimate was not computed");
        m.beta_hat = beta_i;
        m.sigma_sq_hat = sigma_sq_hat_i;
        break;
    case EstimatorKind::ABased:
        if (beta_a.size() == 0) throw Error(ErrorCode::InvalidArgument, "A-based estimate was not computed");
        m.beta_hat = beta_a;
        m.sigma_sq_hat = sigma_sq_hat;
        break;
    default:
        throw Error(ErrorCode::InvalidArgument, "naive and oracle fits need the raw data, not a covariance fit");
    }
    return m;
}

EssentialFit fit_with_partition(const CovarianceSummary& cov, const PurePartition& partition,
                                const FitOptions& options) {
    options.estimation.validate();
    partition.validate();
    if (partition.k_hat() == 0) throw Error(ErrorCode::EmptyPartition, "no pure variables");

    EssentialFit fit;
    fit.n = cov.n;
    fit.partition = partition;
    const Matrix& sigma = cov.sigma_hat;
    const Index p = static_cast<Index>(sigma.rows());

    fit.a_pure = estimate_a_pure(sigma, partition, options.estimation.anchor_rule, options.estimation.rng_seed);
    fit.sigma_z_hat = estimate_sigma_z(sigma, partition, fit.a_pure);
    ClippedVector gamma = estimate_gamma_pure(sigma, fit.sigma_z_hat, fit.a_pure, partition);
    fit.gamma_pure = std::move(gamma.values);
    fit.theta_hat = estimate_theta(sigma, fit.gamma_pure, fit.a_pure, partition);
    fit.beta = estimate_beta(fit.theta_hat, cov.sigma_xy_hat, options.estimation);

    const double radius = options.dantzig_radius >= 0.0
                              ? options.dantzig_radius
                              : dantzig_radius(options.estimation.dantzig_c, std::max<Index>(cov.n, 1), p);
    fit.a_hat = estimate_a_full(fit.sigma_z_hat, sigma, partition, fit.a_pure, radius);
    ClippedVector tau = estimate_tau_sq(sigma, fit.a_hat, fit.sigma_z_hat);
    fit.tau_sq_hat = std::move(tau.values);
    fit.clips.gamma = tau.clipped;

    const ClippedScalar s2 = estimate_sigma_sq(cov, partition, fit.a_pure, fit.sigma_z_hat, fit.beta.beta);
    fit.sigma_sq_hat = s2.value;
    fit.clips.sigma += s2.clipped ? 1 : 0;

    if (options.with_competitors) {
        fit.beta_i = estimate_beta_i(fit.sigma_z_hat, fit.a_pure, partition, cov.sigma_xy_hat);
        const ClippedScalar s2i = estimate_sigma_sq(cov, partition, fit.a_pure, fit.sigma_z_hat, fit.beta_i);
        fit.sigma_sq_hat_i = s2i.value;
        if (options.estimation.a_based_gamma == ABasedGamma::Diagonal)
            fit.beta_a = estimate_beta_a(fit.a_hat, sigma, fit.tau_sq_hat, cov.sigma_xy_hat);
        else
            fit.beta_a = estimate_beta_a_tilde(fit.a_hat, fit.sigma_z_hat, cov.sigma_xy_hat);
    }
    return fit;
}

EssentialFit fit_from_covariance(const CovarianceSummary& cov, double delta, const FitOptions& options) {
    EssentialFit fit = fit_with_partition(cov, pure_var(cov.sigma_hat, delta), options);
    fit.delta = delta;
    return fit;
}

}  // namespace er
