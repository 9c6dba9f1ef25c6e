#include "essreg/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace er {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "ER_INVALID_ARGUMENT";
    case ErrorCode::EmptyPartition: return "ER_EMPTY_PARTITION";
    case ErrorCode::InvariantViolation: return "ER_INVARIANT_VIOLATION";
    case ErrorCode::AllGridFailed: return "ER_ALL_GRID_FAILED";
    case ErrorCode::GroupTooSmall: return "ER_GROUP_TOO_SMALL";
    case ErrorCode::ZeroCovariance: return "ER_ZERO_COVARIANCE";
    case ErrorCode::SingularAfterRidge: return "ER_SINGULAR_AFTER_RIDGE";
    case ErrorCode::LpInfeasible: return "ER_LP_INFEASIBLE";
    case ErrorCode::LpUnbounded: return "ER_LP_UNBOUNDED";
    case ErrorCode::SingularInner: return "ER_SINGULAR_INNER";
    case ErrorCode::SingularSigmaZ: return "ER_SINGULAR_SIGMA_Z";
    case ErrorCode::SingularGram: return "ER_SINGULAR_GRAM";
    case ErrorCode::SingularMiddle: return "ER_SINGULAR_MIDDLE";
    case ErrorCode::HeterogeneousInputs: return "ER_HETEROGENEOUS_INPUTS";
    case ErrorCode::NonpositiveVariance: return "ER_NONPOSITIVE_VARIANCE";
    case ErrorCode::NoOverlap: return "ER_NO_OVERLAP";
    case ErrorCode::MissingColumn: return "ER_MISSING_COLUMN";
    case ErrorCode::ParseError: return "ER_PARSE_ERROR";
    case ErrorCode::IoError: return "ER_IO_ERROR";
    case ErrorCode::FormulaMismatch: return "ER_FORMULA_MISMATCH";
    }
    return "ER_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

Dataset::Dataset(Matrix x_, Vector y_, bool centered_)
    : x(std::move(x_)), y(std::move(y_)), centered(centered_) {
    validate();
}

void Dataset::validate() const {
    if (x.rows() < 2 || x.cols() < 2)
        throw Error(ErrorCode::InvalidArgument, "dataset needs n >= 2 and p >= 2");
    if (x.rows() != y.size())
        throw Error(ErrorCode::InvalidArgument, "x and y row counts differ");
}

IndexSet PurePartition::pure_set() const {
    IndexSet all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<Index> PurePartition::group_sizes() const {
    std::vector<Index> sizes;
    sizes.reserve(groups.size());
    for (const auto& g : groups) sizes.push_back(g.size());
    return sizes;
}

void PurePartition::validate() const {
    IndexSet all;
    for (Index k = 0; k < groups.size(); ++k) {
        if (groups[k].empty())
            throw Error(ErrorCode::InvariantViolation, "group " + std::to_string(k) + " is empty");
        all.insert(all.end(), groups[k].begin(), groups[k].end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw Error(ErrorCode::InvariantViolation, "groups are not disjoint");
}

std::string_view estimator_kind_name(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::Main: return "main";
    case EstimatorKind::ABased: return "A-based";
    case EstimatorKind::IBased: return "I-based";
    case EstimatorKind::Naive: return "naive";
    case EstimatorKind::Oracle: return "oracle";
    }
    return "main";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
    if (name == "main") return EstimatorKind::Main;
    if (name == "A-based" || name == "A") return EstimatorKind::ABased;
    if (name == "I-based" || name == "I") return EstimatorKind::IBased;
    if (name == "naive") return EstimatorKind::Naive;
    if (name == "oracle") return EstimatorKind::Oracle;
    throw Error(ErrorCode::InvalidArgument, "unknown estimator kind '" + std::string(name) + "'");
}

std::string_view variance_formula_name(VarianceFormula formula) {
    switch (formula) {
    case VarianceFormula::General: return "general";
    case VarianceFormula::Simplified: return "simplified";
    case VarianceFormula::LargeSignal: return "large-signal";
    case VarianceFormula::IBased: return "I-based";
    }
    return "general";
}

VarianceFormula parse_variance_formula(std::string_view name) {
    if (name == "general") return VarianceFormula::General;
    if (name == "simplified") return VarianceFormula::Simplified;
    if (name == "large-signal") return VarianceFormula::LargeSignal;
    if (name == "I-based") return VarianceFormula::IBased;
    throw Error(ErrorCode::InvalidArgument, "unknown variance formula '" + std::string(name) + "'");
}

CenterResult center_with_report(const Dataset& dataset) {
    if (dataset.x.rows() < 2)
        throw Error(ErrorCode::InvalidArgument, "centering needs n >= 2");
    CenterResult out{dataset, {}};
    Dataset& d = out.data;
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) {
        if (d.x.col(j).maxCoeff() == d.x.col(j).minCoeff()) {
            d.x.col(j).setZero();
            out.constant_columns.push_back(static_cast<Index>(j));
        } else {
            d.x.col(j).array() -= d.x.col(j).mean();
        }
    }
    if (d.y.maxCoeff() == d.y.minCoeff()) {
        d.y.setZero();
        out.constant_columns.push_back(static_cast<Index>(d.x.cols()));
    } else {
        d.y.array() -= d.y.mean();
    }
    d.centered = true;
    return out;
}

Dataset center(const Dataset& dataset) { return center_with_report(dataset).data; }

Dataset standardize(const Dataset& dataset) {
    Dataset d = dataset;
    const double n = static_cast<double>(d.x.rows());
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) {
        const double mean = d.x.col(j).mean();
        const double sd = std::sqrt((d.x.col(j).array() - mean).square().sum() / n);
        if (sd > 0.0) d.x.col(j) /= sd;
    }
    return d;
}

CovarianceSummary sample_covariance(const Dataset& dataset) {
    if (!dataset.centered)
        throw Error(ErrorCode::InvalidArgument, "sample_covariance requires a centered dataset");
    const double n = static_cast<double>(dataset.x.rows());
    CovarianceSummary cov;
    cov.n = dataset.n();
    cov.sigma_hat = Matrix::Zero(dataset.x.cols(), dataset.x.cols());
    cov.sigma_hat.selfadjointView<Eigen::Lower>().rankUpdate(dataset.x.transpose(), 1.0 / n);
    cov.sigma_hat = cov.sigma_hat.selfadjointView<Eigen::Lower>();
    cov.sigma_xy_hat = dataset.x.transpose() * dataset.y / n;
    cov.yy_hat = dataset.y.squaredNorm() / n;
    return cov;
}

double delta_default(double n, double p, double c) {
    return c * std::sqrt(std::log(std::max(p, n)) / n);
}

}  // namespace er
