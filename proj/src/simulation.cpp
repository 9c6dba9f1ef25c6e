#include "essreg/simulation.hpp"

#include "essreg/assignment.hpp"
#include "essreg/pure_variables.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <thread>

namespace er {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kDataStream = 2;
constexpr std::uint64_t kCvStream = 3;
constexpr std::uint64_t kAnchorStream = 4;
constexpr std::uint64_t kFixedTruthStream = 0x7472757468ULL;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Matrix overlap_counts(const PurePartition& hat, const PurePartition& truth) {
    Matrix o = Matrix::Zero(ei(hat.k_hat()), ei(truth.k_hat()));
    for (Index k = 0; k < hat.k_hat(); ++k) {
        IndexSet g = hat.groups[k];
        std::sort(g.begin(), g.end());
        for (Index a = 0; a < truth.k_hat(); ++a) {
            IndexSet t = truth.groups[a];
            std::sort(t.begin(), t.end());
            IndexSet common;
            std::set_intersection(g.begin(), g.end(), t.begin(), t.end(), std::back_inserter(common));
            o(ei(k), ei(a)) = static_cast<double>(common.size());
        }
    }
    return o;
}

bool overlap_ambiguous(const Matrix& overlap, const Alignment& al) {
    if (al.pairs.size() < static_cast<Index>(overlap.rows())) return true;
    for (Eigen::Index k = 0; k < overlap.rows(); ++k)
        if ((overlap.row(k).array() > 0.0).count() > 1) return true;
    for (Eigen::Index a = 0; a < overlap.cols(); ++a)
        if ((overlap.col(a).array() > 0.0).count() > 1) return true;
    return false;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void DgpConfig::validate() const {
    if (n < 2 || p < 2 || k < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "n, p >= 2 and k, m >= 1 required");
    if (k * m > p) throw Error(ErrorCode::InvalidArgument, "k * m must not exceed p");
    if (weak_column_count > k) throw Error(ErrorCode::InvalidArgument, "weak column count exceeds k");
    if (weak_column_theta && !(*weak_column_theta >= 0.0 && *weak_column_theta <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, 1]");
    if (!(sigma_z_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_z scale must be > 0");
    if (sigma_z_kind == SigmaZKind::ArRho && !(std::abs(ar_rho) < 1.0))
        throw Error(ErrorCode::InvalidArgument, "|rho| must be < 1");
    if (gamma_kind == GammaKind::Scalar && !(gamma_scalar >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "gamma scalar must be >= 0");
    if (beta_kind == BetaKind::Fixed && static_cast<Index>(beta_fixed.size()) != k)
        throw Error(ErrorCode::InvalidArgument, "fixed beta must have k entries");
    if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma^2 must be >= 0");
}

Matrix make_sigma_z(const DgpConfig& c) {
    const Eigen::Index k = ei(c.k);
    Matrix s(k, k);
    switch (c.sigma_z_kind) {
    case SigmaZKind::BandedAr: {
        Vector d(k);
        for (Eigen::Index i = 0; i < k; ++i)
            d(i) = k == 1 ? 2.5 : 2.5 + 0.5 * static_cast<double>(i) / static_cast<double>(k - 1);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                s(i, j) = i == j ? d(i)
                                 : ((i + j) % 2 == 0 ? 1.0 : -1.0) * std::min(d(i), d(j)) *
                                       std::pow(0.3, static_cast<double>(std::abs(i - j)));
        break;
    }
    case SigmaZKind::IdentityScaled:
        s = c.sigma_z_scale * Matrix::Identity(k, k);
        break;
    case SigmaZKind::ArRho:
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                s(i, j) = c.sigma_z_scale * ((i + j) % 2 == 0 ? 1.0 : -1.0) *
                          std::pow(c.ar_rho, static_cast<double>(std::abs(i - j)));
        break;
    }
    return s;
}

SimulationTruth generate_truth(const DgpConfig& c) {
    c.validate();
    std::mt19937_64 rng(c.rng_seed);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    std::uniform_real_distribution<double> unif13(1.0, 3.0);
    std::bernoulli_distribution coin(0.5);

    const Eigen::Index p = ei(c.p), k = ei(c.k), m = ei(c.m);
    SimulationTruth t;
    t.sigma_z_true = make_sigma_z(c);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(t.sigma_z_true, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < 1e-8)
        throw Error(ErrorCode::InvalidArgument, "generated Sigma_Z is not positive definite");

    t.a_true = Matrix::Zero(p, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index r = 0; r < m; ++r) t.a_true(a * m + r, a) = 1.0;

    std::vector<Eigen::Index> cols(static_cast<Index>(k));
    for (Eigen::Index j = k * m; j < p; ++j) {
        const Eigen::Index support =
            k >= 2 ? std::uniform_int_distribution<Eigen::Index>(2, k)(rng) : Eigen::Index{1};
        std::iota(cols.begin(), cols.end(), Eigen::Index{0});
        std::shuffle(cols.begin(), cols.end(), rng);
        double l1 = 0.0;
        for (Eigen::Index s = 0; s < support; ++s) {
            const double v = unif01(rng);
            t.a_true(j, cols[static_cast<Index>(s)]) = v;
            l1 += v;
        }
        if (l1 > 1.0) t.a_true.row(j) /= l1;
        for (Eigen::Index s = 0; s < support; ++s)
            if (coin(rng)) t.a_true(j, cols[static_cast<Index>(s)]) *= -1.0;
    }

    if (c.weak_column_theta && c.weak_column_count > 0) {
        std::bernoulli_distribution drop(1.0 - *c.weak_column_theta);
        for (Eigen::Index col = k - ei(c.weak_column_count); col < k; ++col)
            for (Eigen::Index j = 0; j < p; ++j)
                if (drop(rng)) t.a_true(j, col) = 0.0;
        t.assumption_broken = true;
    }

    t.gamma_true.resize(p);
    for (Eigen::Index j = 0; j < p; ++j)
        t.gamma_true(j) = c.gamma_kind == GammaKind::Unif13 ? unif13(rng) : c.gamma_scalar;

    if (c.beta_kind == BetaKind::Fixed) {
        t.beta_true = c.beta_fixed;
    } else {
        t.beta_true.resize(k);
        for (Eigen::Index a = 0; a < k; ++a) t.beta_true(a) = unif13(rng);
    }
    t.sigma_sq_true = c.sigma_sq;

    t.partition_true.groups.assign(c.k, {});
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::Index nz = 0, where = -1;
        for (Eigen::Index a = 0; a < k; ++a)
            if (t.a_true(j, a) != 0.0) {
                ++nz;
                where = a;
            }
        if (nz == 1 && std::abs(t.a_true(j, where)) == 1.0)
            t.partition_true.groups[static_cast<Index>(where)].push_back(static_cast<Index>(j));
    }

    const Eigen::LLT<Matrix> llt(t.sigma_z_true);
    const Matrix l = llt.matrixL();
    const Matrix inner = l.transpose() * (t.a_true.transpose() * t.a_true) * l;
    Eigen::SelfAdjointEigenSolver<Matrix> ev(inner, Eigen::EigenvaluesOnly);
    t.lambda_k = std::max(0.0, ev.eigenvalues()(0));

    double rho = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) {
        const double pure = static_cast<double>(t.partition_true.groups[static_cast<Index>(a)].size());
        double quasi = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const bool is_pure = std::find(t.partition_true.groups[static_cast<Index>(a)].begin(),
                                           t.partition_true.groups[static_cast<Index>(a)].end(),
                                           static_cast<Index>(j)) != t.partition_true.groups[static_cast<Index>(a)].end();
            if (!is_pure && std::abs(t.a_true(j, a)) >= c.quasi_pure_threshold) quasi += 1.0;
        }
        if (pure + quasi > 0.0) rho += (quasi / (pure + quasi)) * (quasi / (pure + quasi));
    }
    t.rho_bar_sq = rho;
    return t;
}

SampledData sample_dataset(const SimulationTruth& truth, Index n, std::uint64_t rng_seed) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> norm(0.0, 1.0);
    const Eigen::Index k = truth.sigma_z_true.rows();
    const Eigen::Index p = truth.a_true.rows();
    const Eigen::Index nn = ei(n);

    Matrix g(nn, k);
    for (Eigen::Index i = 0; i < nn; ++i)
        for (Eigen::Index a = 0; a < k; ++a) g(i, a) = norm(rng);
    const Matrix l = Eigen::LLT<Matrix>(truth.sigma_z_true).matrixL();
    SampledData out;
    out.z = g * l.transpose();

    Matrix w(nn, p);
    const Vector sd = truth.gamma_true.cwiseSqrt();
    for (Eigen::Index i = 0; i < nn; ++i)
        for (Eigen::Index j = 0; j < p; ++j) w(i, j) = sd(j) * norm(rng);
    Vector eps(nn);
    const double s = std::sqrt(truth.sigma_sq_true);
    for (Eigen::Index i = 0; i < nn; ++i) eps(i) = s * norm(rng);

    Matrix x = out.z * truth.a_true.transpose() + w;
    Vector y = out.z * truth.beta_true + eps;
    out.data = Dataset(std::move(x), std::move(y), false);
    return out;
}

CovarianceSummary population_covariance(const SimulationTruth& truth, Index n) {
    CovarianceSummary c;
    const Matrix as = truth.a_true * truth.sigma_z_true;
    c.sigma_hat = as * truth.a_true.transpose();
    c.sigma_hat.diagonal() += truth.gamma_true;
    c.sigma_xy_hat = as * truth.beta_true;
    c.yy_hat = truth.beta_true.dot(truth.sigma_z_true * truth.beta_true) + truth.sigma_sq_true;
    c.n = n;
    return c;
}

Alignment align_factors(const PurePartition& hat, const Matrix& a_hat, const PurePartition& truth,
                        const Matrix& a_true) {
    const Matrix o = overlap_counts(hat, truth);
    if (o.size() == 0 || o.maxCoeff() <= 0.0)
        throw Error(ErrorCode::NoOverlap, "no estimated group intersects a true group");
    const Assignment as = hungarian_max(o);
    Alignment al;
    for (Index k = 0; k < as.row_to_col.size(); ++k) {
        const long a = as.row_to_col[k];
        if (a < 0 || o(ei(k), a) <= 0.0) continue;
        double vote = 0.0;
        for (Index i : hat.groups[k]) {
            const auto& tg = truth.groups[static_cast<Index>(a)];
            if (std::find(tg.begin(), tg.end(), i) != tg.end()) vote += a_hat(ei(i), ei(k)) * a_true(ei(i), a);
        }
        al.pairs.push_back({k, static_cast<Index>(a), vote >= 0.0 ? 1.0 : -1.0});
    }
    return al;
}

Alignment min_signed_permutation(const Vector& beta_hat, const Vector& beta) {
    if (beta_hat.size() != beta.size())
        throw Error(ErrorCode::InvalidArgument, "signed permutation needs equal lengths");
    const Eigen::Index k = beta.size();
    Matrix cost(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index a = 0; a < k; ++a) {
            const double d = std::abs(beta_hat(i)) - std::abs(beta(a));
            cost(i, a) = d * d;
        }
    const Assignment as = hungarian_min(cost);
    Alignment al;
    al.by_overlap = false;
    for (Index i = 0; i < as.row_to_col.size(); ++i) {
        const long a = as.row_to_col[i];
        al.pairs.push_back({i, static_cast<Index>(a), beta_hat(ei(i)) * beta(a) >= 0.0 ? 1.0 : -1.0});
    }
    return al;
}

double min_signed_permutation_error(const Vector& beta_hat, const Vector& beta) {
    return matched_error(beta_hat, beta, min_signed_permutation(beta_hat, beta));
}

double matched_error(const Vector& beta_hat, const Vector& beta, const Alignment& al) {
    double s = 0.0;
    for (const MatchedPair& mp : al.pairs) {
        const double d = beta_hat(ei(mp.hat)) - mp.sign * beta(ei(mp.truth));
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

Alignment align_with_fallback(const Vector& beta_hat, const Vector& beta_true, const PurePartition& hat,
                              const PurePartition& truth, const Matrix& a_hat, const Matrix& a_true) {
    Alignment al = align_factors(hat, a_hat, truth, a_true);
    if (hat.k_hat() == truth.k_hat() && static_cast<Index>(beta_hat.size()) == hat.k_hat() &&
        overlap_ambiguous(overlap_counts(hat, truth), al))
        al = min_signed_permutation(beta_hat, beta_true);
    return al;
}

}  // namespace

double aligned_error(const Vector& beta_hat, const Vector& beta_true, const PurePartition& hat,
                     const PurePartition& truth, const Matrix& a_hat, const Matrix& a_true) {
    return matched_error(beta_hat, beta_true, align_with_fallback(beta_hat, beta_true, hat, truth, a_hat, a_true));
}

std::uint64_t replication_seed(std::uint64_t seed, Index rep) { return seed ^ static_cast<std::uint64_t>(rep); }

std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

unsigned worker_count(unsigned requested, Index jobs) {
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ER_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) w = std::min(w, static_cast<unsigned>(cap));
    }
    if (jobs < w) w = static_cast<unsigned>(std::max<Index>(jobs, 1));
    return w;
}

ReplicationResult run_replication(const ExperimentConfig& cfg, Index rep, const SimulationTruth* fixed_truth) {
    const auto start = std::chrono::steady_clock::now();
    ReplicationResult res;
    res.rep = rep;
    const std::uint64_t rs = replication_seed(cfg.seed, rep);
    const Index n = cfg.dgp.n, p = cfg.dgp.p;

    try {
        SimulationTruth own;
        if (!fixed_truth) {
            DgpConfig d = cfg.dgp;
            d.rng_seed = substream(rs, kTruthStream);
            own = generate_truth(d);
        }
        const SimulationTruth& truth = fixed_truth ? *fixed_truth : own;

        const SampledData sample = sample_dataset(truth, n, substream(rs, kDataStream));
        const Dataset centered = center(sample.data);
        const CovarianceSummary cov = sample_covariance(centered);

        double delta = 0.0;
        if (cfg.delta_mode == DeltaMode::Cv) {
            std::vector<double> grid;
            if (cfg.cv_grid_c.empty()) {
                grid = default_delta_grid(n, p, 30, 0.05, 4.0);
            } else {
                const double rate = delta_default(static_cast<double>(n), static_cast<double>(p), 1.0);
                for (double c : cfg.cv_grid_c) grid.push_back(c * rate);
            }
            delta = usable_delta(cv_select_delta(sample.data, grid, substream(rs, kCvStream)), cov.sigma_hat);
        } else {
            delta = cfg.delta > 0.0 ? cfg.delta
                                    : delta_default(static_cast<double>(n), static_cast<double>(p), cfg.delta_c);
        }
        res.delta = delta;

        FitOptions opts;
        opts.estimation = cfg.estimation;
        opts.estimation.rng_seed = substream(rs, kAnchorStream);
        const EssentialFit fit = fit_from_covariance(cov, delta, opts);
        res.k_hat = fit.partition.k_hat();
        res.clips = fit.clips;

        const Alignment al = align_with_fallback(fit.beta.beta, truth.beta_true, fit.partition, truth.partition_true,
                                                 fit.a_hat, truth.a_true);
        res.by_overlap = al.by_overlap;
        res.matched = al.pairs.size();
        const double matched = static_cast<double>(std::max<Index>(res.matched, 1));

        for (Index e = 0; e < kAllEstimators.size(); ++e) {
            try {
                double l2 = 0.0;
                switch (kAllEstimators[e]) {
                case EstimatorKind::Main: l2 = matched_error(fit.beta.beta, truth.beta_true, al); break;
                case EstimatorKind::ABased: l2 = matched_error(fit.beta_a, truth.beta_true, al); break;
                case EstimatorKind::IBased: l2 = matched_error(fit.beta_i, truth.beta_true, al); break;
                case EstimatorKind::Naive:
                    l2 = matched_error(estimate_beta_naive(centered, fit.a_hat), truth.beta_true, al);
                    break;
                case EstimatorKind::Oracle: {
                    Matrix z(ei(n), ei(al.pairs.size()));
                    Vector b(ei(al.pairs.size()));
                    for (Index c = 0; c < al.pairs.size(); ++c) {
                        z.col(ei(c)) = sample.z.col(ei(al.pairs[c].truth));
                        b(ei(c)) = truth.beta_true(ei(al.pairs[c].truth));
                    }
                    l2 = (estimate_beta_oracle(z, sample.data.y) - b).norm();
                    break;
                }
                }
                if (!std::isfinite(l2)) continue;
                res.l2[e] = l2;
                res.sq_err[e] = l2 * l2 / matched;
                res.has_error[e] = true;
            } catch (const Error&) {
            }
        }

        const auto target = std::find_if(al.pairs.begin(), al.pairs.end(),
                                         [&](const MatchedPair& mp) { return mp.truth == cfg.coordinate; });
        if (target != al.pairs.end()) {
            const Index k = target->hat;
            const double s = target->sign;
            const double b = truth.beta_true(ei(cfg.coordinate));
            try {
                const VarianceInputs in = VarianceInputs::from_fit(fit, EstimatorKind::Main);
                const double v = variance_vk_general(in, k);
                const InferenceReport ci = confidence_interval(fit.beta.beta(ei(k)), v, n, cfg.level, k);
                res.has_ci = true;
                res.variance_v = v;
                const double bs = s * b;
                res.covered_v = ci.ci_lower <= bs && bs <= ci.ci_upper;
                res.ci_length_v = ci.ci_upper - ci.ci_lower;
                res.standardized_v = (s * fit.beta.beta(ei(k)) - b) / ci.std_error;
                res.scaled_error = std::sqrt(static_cast<double>(n)) * (s * fit.beta.beta(ei(k)) - b);
            } catch (const Error&) {
            }
            try {
                const VarianceInputs in = VarianceInputs::from_fit(fit, EstimatorKind::IBased);
                const double u = variance_uk(in, k, HomogeneityGate::Pool);
                const InferenceReport ci = confidence_interval(fit.beta_i(ei(k)), u, n, cfg.level, k,
                                                               VarianceFormula::IBased);
                res.has_ci_u = true;
                res.covered_u = ci.ci_lower <= s * b && s * b <= ci.ci_upper;
                res.ci_length_u = ci.ci_upper - ci.ci_lower;
            } catch (const Error&) {
            }
        }
        res.ok = true;
    } catch (const Error& e) {
        res.ok = false;
        res.failure_code = std::string(e.code_name());
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

ExperimentSummary summarize(const ExperimentConfig& cfg, std::vector<ReplicationResult> results) {
    ExperimentSummary s;
    s.label = cfg.label;
    s.dgp = cfg.dgp;
    s.reps = results.size();
    std::array<std::vector<double>, 5> l2, sq;
    std::vector<double> khat, len_v, var_v, len_u;
    Index cov_v = 0, cov_u = 0, correct = 0;
    for (const ReplicationResult& r : results) {
        if (!r.ok) {
            ++s.failed;
            ++s.failure_codes[r.failure_code];
            continue;
        }
        ++s.ok;
        ++s.k_hat_histogram[r.k_hat];
        khat.push_back(static_cast<double>(r.k_hat));
        if (r.k_hat == cfg.dgp.k) ++correct;
        for (Index e = 0; e < 5; ++e)
            if (r.has_error[e]) {
                l2[e].push_back(r.l2[e]);
                sq[e].push_back(r.sq_err[e]);
            }
        if (r.has_ci) {
            ++s.ci_count;
            cov_v += r.covered_v ? 1 : 0;
            len_v.push_back(r.ci_length_v);
            var_v.push_back(r.variance_v);
            s.standardized.push_back(r.standardized_v);
            s.scaled_errors.push_back(r.scaled_error);
        }
        if (r.has_ci_u) {
            ++s.ci_count_u;
            cov_u += r.covered_u ? 1 : 0;
            len_u.push_back(r.ci_length_u);
        }
    }
    for (Index e = 0; e < 5; ++e) {
        s.mean_l2[e] = mean_of(l2[e]);
        s.mean_sq_err[e] = mean_of(sq[e]);
        s.error_count[e] = l2[e].size();
    }
    s.mean_k_hat = mean_of(khat);
    s.frac_k_correct = s.ok ? static_cast<double>(correct) / static_cast<double>(s.ok) : 0.0;
    s.coverage_v = s.ci_count ? static_cast<double>(cov_v) / static_cast<double>(s.ci_count) : 0.0;
    s.mean_ci_length_v = mean_of(len_v);
    s.mean_variance_v = mean_of(var_v);
    s.coverage_u = s.ci_count_u ? static_cast<double>(cov_u) / static_cast<double>(s.ci_count_u) : 0.0;
    s.mean_ci_length_u = mean_of(len_u);
    s.replications = std::move(results);
    return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    if (cfg.reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
    cfg.dgp.validate();
    cfg.estimation.validate();
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
    if (cfg.coordinate >= cfg.dgp.k) throw Error(ErrorCode::InvalidArgument, "target coordinate out of range");

    std::optional<SimulationTruth> fixed;
    if (cfg.truth_mode == TruthMode::Fixed) {
        DgpConfig d = cfg.dgp;
        d.rng_seed = substream(cfg.seed, kFixedTruthStream);
        fixed = generate_truth(d);
    }
    const SimulationTruth* fixed_ptr = fixed ? &*fixed : nullptr;

    std::vector<ReplicationResult> results(cfg.reps);
    const unsigned workers = worker_count(cfg.threads, cfg.reps);
    std::atomic<Index> next{0};
    auto work = [&] {
        for (Index r = next++; r < cfg.reps; r = next++) results[r] = run_replication(cfg, r, fixed_ptr);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return summarize(cfg, std::move(results));
}

std::vector<ExperimentConfig> preset_table_main(Index reps, std::uint64_t seed) {
    std::vector<ExperimentConfig> out;
    for (Index n : {200, 400, 600, 800}) {
        ExperimentConfig c;
        c.dgp.n = n;
        c.dgp.p = 400;
        c.dgp.k = 10;
        c.dgp.m = 5;
        c.reps = reps;
        c.seed = seed;
        c.label = "n=" + std::to_string(n);
        out.push_back(c);
    }
    return out;
}

}  // namespace er
