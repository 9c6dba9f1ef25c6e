#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace er {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::size_t;
using IndexSet = std::vector<Index>;

// Stable error codes. The string form (ER_*) is part of the CLI contract.
enum class ErrorCode {
    InvalidArgument,
    EmptyPartition,
    InvariantViolation,
    AllGridFailed,
    GroupTooSmall,
    ZeroCovariance,
    SingularAfterRidge,
    LpInfeasible,
    LpUnbounded,
    SingularInner,
    SingularSigmaZ,
    SingularGram,
    SingularMiddle,
    HeterogeneousInputs,
    NonpositiveVariance,
    NoOverlap,
    MissingColumn,
    ParseError,
    IoError,
    FormulaMismatch,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    std::string_view code_name() const noexcept { return error_code_name(code_); }

private:
    ErrorCode code_;
};

struct Dataset {
    Matrix x;  // n x p
    Vector y;  // n
    bool centered = false;
    std::vector<std::string> column_names;  // optional, size p when present
    std::string response_name;
    std::string source;                     // provenance, e.g. the CSV path

    Dataset() = default;
    Dataset(Matrix x_, Vector y_, bool centered_ = false);

    Index n() const { return static_cast<Index>(x.rows()); }
    Index p() const { return static_cast<Index>(x.cols()); }

    // Throws InvalidArgument when n < 2, p < 2 or the row counts disagree.
    void validate() const;
};

struct CovarianceSummary {
    Matrix sigma_hat;    // n^{-1} X^T X
    Vector sigma_xy_hat; // n^{-1} X^T y
    double yy_hat = 0.0; // n^{-1} y^T y
    Index n = 0;
};

// Ordered groups of pure variables. Indices within a group are ascending;
// group order is discovery order.
struct PurePartition {
    std::vector<IndexSet> groups;

    Index k_hat() const { return groups.size(); }
    IndexSet pure_set() const;  // ascending union of the groups
    std::vector<Index> group_sizes() const;
    // Throws InvariantViolation if groups overlap or one is empty.
    void validate() const;
};

enum class EstimatorKind { Main, ABased, IBased, Naive, Oracle };

std::string_view estimator_kind_name(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

struct ClipCounts {
    Index gamma = 0;  // negative Gamma/tau^2 plug-ins set to 0
    Index sigma = 0;  // negative sigma^2 plug-ins set to 0
};

struct FittedModel {
    Matrix a_hat;        // p x K
    Matrix sigma_z_hat;  // K x K
    Vector gamma_hat;    // p, diagonal of Gamma-hat
    Matrix theta_hat;    // p x K
    Vector beta_hat;     // K
    double sigma_sq_hat = 0.0;
    Vector tau_sq_hat;   // p
    PurePartition partition;
    EstimatorKind estimator_kind = EstimatorKind::Main;
    double ridge_t = 0.0;
    ClipCounts clip_counts;
    double delta = 0.0;
    Index n = 0;
};

enum class VarianceFormula { General, Simplified, LargeSignal, IBased };

std::string_view variance_formula_name(VarianceFormula formula);
VarianceFormula parse_variance_formula(std::string_view name);

struct InferenceReport {
    Index coordinate = 0;
    double estimate = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double z_stat = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double level = 0.95;
    VarianceFormula variance_formula = VarianceFormula::General;
};

struct SimulationTruth {
    Matrix a_true;        // p x K
    Matrix sigma_z_true;  // K x K
    Vector gamma_true;    // p
    Vector beta_true;     // K
    double sigma_sq_true = 1.0;
    // partition_true.groups[a] lists the rows equal to +-e_a (possibly empty
    // after column thinning); group index a is the factor index.
    PurePartition partition_true;
    double lambda_k = 0.0;
    double rho_bar_sq = 0.0;
    bool assumption_broken = false;  // set by weak-column thinning
};

// Subtracts column means from x and the mean from y. Returns the columns
// (x indices, or p for y) that were constant and became identically zero.
struct CenterResult {
    Dataset data;
    std::vector<Index> constant_columns;
};
CenterResult center_with_report(const Dataset& dataset);
Dataset center(const Dataset& dataset);

// Scales every x column to unit (divisor n) variance; constant columns are left at 0.
Dataset standardize(const Dataset& dataset);

// Divisor n, not n - 1. Requires a centered dataset.
CovarianceSummary sample_covariance(const Dataset& dataset);

// c * sqrt(log(max(p, n)) / n)
double delta_default(double n, double p, double c);

}  // namespace er
