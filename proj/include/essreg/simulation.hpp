#pragma once

#include "essreg/core.hpp"
#include "essreg/estimation.hpp"
#include "essreg/inference.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace er {

enum class SigmaZKind { BandedAr, IdentityScaled, ArRho };
enum class GammaKind { Unif13, Scalar };
enum class BetaKind { Unif13, Fixed };

struct DgpConfig {
    Index n = 300;
    Index p = 400;
    Index k = 10;
    Index m = 5;
    SigmaZKind sigma_z_kind = SigmaZKind::BandedAr;
    double sigma_z_scale = 3.0;  // identity-scaled and ar-rho
    double ar_rho = 0.3;
    GammaKind gamma_kind = GammaKind::Unif13;
    double gamma_scalar = 1.0;
    BetaKind beta_kind = BetaKind::Unif13;
    Vector beta_fixed;
    double sigma_sq = 1.0;
    std::optional<double> weak_column_theta;
    Index weak_column_count = 0;
    double quasi_pure_threshold = 0.9;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

Matrix make_sigma_z(const DgpConfig& config);

SimulationTruth generate_truth(const DgpConfig& config);

struct SampledData {
    Dataset data;
    Matrix z;  // n x K
};

SampledData sample_dataset(const SimulationTruth& truth, Index n, std::uint64_t rng_seed);

// Population moments of (X, y) under the truth.
CovarianceSummary population_covariance(const SimulationTruth& truth, Index n = 0);

// Estimated factor `hat` is matched to true factor `truth`; beta_hat[hat] estimates sign * beta[truth].
struct MatchedPair {
    Index hat = 0;
    Index truth = 0;
    double sign = 1.0;
};

struct Alignment {
    std::vector<MatchedPair> pairs;
    bool by_overlap = true;  // false when the value-based fallback was used
};

// Matches estimated groups to true groups by overlap count. Signs come from
// the loadings of the shared pure rows. Throws NoOverlap.
Alignment align_factors(const PurePartition& partition_hat, const Matrix& a_hat,
                        const PurePartition& partition_true, const Matrix& a_true);

// min over signed permutations P of ||beta_hat - P beta||_2 (equal lengths).
double min_signed_permutation_error(const Vector& beta_hat, const Vector& beta);
Alignment min_signed_permutation(const Vector& beta_hat, const Vector& beta);

double matched_error(const Vector& beta_hat, const Vector& beta, const Alignment& alignment);

// Overlap alignment, falling back to the exact signed-permutation minimum when
// K-hat = K and the overlap matching is ambiguous.
double aligned_error(const Vector& beta_hat, const Vector& beta_true, const PurePartition& partition_hat,
                     const PurePartition& partition_true, const Matrix& a_hat, const Matrix& a_true);

enum class DeltaMode { Cv, Fixed };
enum class TruthMode { PerReplication, Fixed };

inline constexpr std::array<EstimatorKind, 5> kAllEstimators = {
    EstimatorKind::Main, EstimatorKind::ABased, EstimatorKind::IBased, EstimatorKind::Naive, EstimatorKind::Oracle};

struct ExperimentConfig {
    DgpConfig dgp;
    Index reps = 200;
    std::uint64_t seed = 1;
    DeltaMode delta_mode = DeltaMode::Cv;
    double delta = 0.0;             // fixed mode; <= 0 means delta_default(n, p, delta_c)
    double delta_c = 3.0;
    std::vector<double> cv_grid_c;  // multiples of sqrt(log(p v n)/n); empty: 30 points in [0.05, 4]
    TruthMode truth_mode = TruthMode::PerReplication;
    EstimationConfig estimation;
    double level = 0.95;
    Index coordinate = 0;  // true coordinate the intervals target
    unsigned threads = 0;  // 0: hardware concurrency, capped by ER_THREADS
    std::string label;
};

struct ReplicationResult {
    Index rep = 0;
    bool ok = false;
    std::string failure_code;
    Index k_hat = 0;
    double delta = 0.0;
    bool by_overlap = true;
    Index matched = 0;
    std::array<double, 5> l2{};       // per estimator, kAllEstimators order
    std::array<double, 5> sq_err{};   // ||.||^2 / matched
    std::array<bool, 5> has_error{};
    // Interval for the target coordinate, V-hat (main) and U-hat (I-based).
    bool has_ci = false;
    bool covered_v = false;
    double ci_length_v = 0.0;
    double variance_v = 0.0;
    double standardized_v = 0.0;
    double scaled_error = 0.0;  // sqrt(n)(beta_hat_k - beta_k), sign aligned
    bool has_ci_u = false;
    bool covered_u = false;
    double ci_length_u = 0.0;
    ClipCounts clips;
    double seconds = 0.0;
};

struct ExperimentSummary {
    std::string label;
    DgpConfig dgp;
    Index reps = 0;
    Index ok = 0;
    Index failed = 0;
    std::map<std::string, Index> failure_codes;
    std::array<double, 5> mean_l2{};
    std::array<double, 5> mean_sq_err{};
    std::array<Index, 5> error_count{};
    std::map<Index, Index> k_hat_histogram;
    double mean_k_hat = 0.0;
    double frac_k_correct = 0.0;
    Index ci_count = 0;
    double coverage_v = 0.0;
    double mean_ci_length_v = 0.0;
    double mean_variance_v = 0.0;
    Index ci_count_u = 0;
    double coverage_u = 0.0;
    double mean_ci_length_u = 0.0;
    std::vector<double> standardized;  // by replication, intervals only
    std::vector<double> scaled_errors;
    std::vector<ReplicationResult> replications;
};

// seed ^ r, then split into independent streams.
std::uint64_t replication_seed(std::uint64_t seed, Index rep);
std::uint64_t substream(std::uint64_t seed, std::uint64_t stream);

unsigned worker_count(unsigned requested, Index jobs);

ReplicationResult run_replication(const ExperimentConfig& config, Index rep, const SimulationTruth* fixed_truth);
ExperimentSummary summarize(const ExperimentConfig& config, std::vector<ReplicationResult> results);
ExperimentSummary run_experiment(const ExperimentConfig& config);

// The four n-sweep rows of the main table.
std::vector<ExperimentConfig> preset_table_main(Index reps, std::uint64_t seed);

}  // namespace er
