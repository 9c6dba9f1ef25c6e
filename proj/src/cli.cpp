#include "essreg/cli.hpp"

#include "essreg/estimation.hpp"
#include "essreg/inference.hpp"
#include "essreg/io.hpp"
#include "essreg/pure_variables.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

namespace er {

namespace {

double parse_double(const std::string& text, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        throw Error(ErrorCode::InvalidArgument, std::string("bad value for ") + what + ": '" + text + "'");
    return v;
}

int report(const Error& e, std::ostream& err) {
    err << "error [" << e.code_name() << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
}

std::string join_sizes(const PurePartition& part) {
    std::string s;
    for (Index g : part.group_sizes()) s += (s.empty() ? "" : " ") + std::to_string(g);
    return s;
}

Dataset load(const std::string& path, const std::string& response) {
    if (path.empty()) throw Error(ErrorCode::InvalidArgument, "no input CSV given");
    return read_csv(path, response);
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::MissingColumn:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::FormulaMismatch:
        return static_cast<int>(ExitCode::Validation);
    default:
        return static_cast<int>(ExitCode::Failure);
    }
}

DeltaChoice parse_delta_choice(const std::string& text) {
    DeltaChoice d;
    if (text == "cv") return d;
    d.cv = false;
    d.value = parse_double(text, "--delta");
    if (!(d.value > 0.0)) throw Error(ErrorCode::InvalidArgument, "--delta must be 'cv' or a positive number");
    return d;
}

void apply_sigma_z_flag(DgpConfig& dgp, const std::string& text) {
    if (text == "paper-ar") {
        dgp.sigma_z_kind = SigmaZKind::BandedAr;
    } else if (text == "identity") {
        dgp.sigma_z_kind = SigmaZKind::IdentityScaled;
    } else if (text.rfind("ar:", 0) == 0) {
        dgp.sigma_z_kind = SigmaZKind::ArRho;
        dgp.ar_rho = parse_double(text.substr(3), "--sigma-z");
    } else {
        throw Error(ErrorCode::InvalidArgument, "--sigma-z must be paper-ar, identity or ar:RHO");
    }
}

void apply_gamma_flag(DgpConfig& dgp, const std::string& text) {
    if (text == "unif") {
        dgp.gamma_kind = GammaKind::Unif13;
    } else if (text.rfind("scalar:", 0) == 0) {
        dgp.gamma_kind = GammaKind::Scalar;
        dgp.gamma_scalar = parse_double(text.substr(7), "--gamma");
    } else {
        throw Error(ErrorCode::InvalidArgument, "--gamma must be unif or scalar:V");
    }
}

int run_fit(const FitCliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.estimation.validate();
        if (cfg.estimator == EstimatorKind::Oracle)
            throw Error(ErrorCode::InvalidArgument, "the oracle estimator needs the latent factors");
        Dataset data = load(cfg.input, cfg.response);
        if (cfg.standardize) data = standardize(data);
        const CenterResult cr = center_with_report(data);
        for (Index c : cr.constant_columns)
            if (cfg.verbosity > 0)
                err << "warning: column " << (c < data.p() ? std::to_string(c) : std::string("y"))
                    << " is constant\n";
        const CovarianceSummary cov = sample_covariance(cr.data);

        double delta = cfg.delta.value;
        if (cfg.delta.cv) {
            const CvReport rep = cv_select_delta(data, default_delta_grid(data.n(), data.p()), cfg.seed);
            delta = usable_delta(rep, cov.sigma_hat);
            if (cfg.verbosity > 0) {
                out << "cv grid (delta, k_hat, score):\n";
                for (const CvRecord& r : rep.records)
                    out << "  " << format_double(r.delta) << " " << r.k_hat << " "
                        << (std::isfinite(r.cv_score) ? format_double(r.cv_score) : "inf") << "\n";
            }
            out << "chosen delta: " << format_double(delta) << "\n";
        }

        FitOptions opts;
        opts.estimation = cfg.estimation;
        opts.estimation.rng_seed = cfg.seed;
        const EssentialFit fit = fit_from_covariance(cov, delta, opts);
        FittedModel model;
        if (cfg.estimator == EstimatorKind::Naive) {
            model = fit.model(EstimatorKind::Main);
            model.estimator_kind = EstimatorKind::Naive;
            model.beta_hat = estimate_beta_naive(cr.data, fit.a_hat);
        } else {
            model = fit.model(cfg.estimator);
        }
        write_model(cfg.output, model);

        out << "K_hat: " << fit.partition.k_hat() << "\n";
        out << "group sizes: " << join_sizes(fit.partition) << "\n";
        out << "ridge_t: " << format_double(model.ridge_t) << "\n";
        out << "clipped gamma: " << model.clip_counts.gamma << ", clipped sigma^2: " << model.clip_counts.sigma
            << "\n";
        out << "beta_hat:";
        for (Eigen::Index k = 0; k < model.beta_hat.size(); ++k) out << " " << format_double(model.beta_hat(k));
        out << "\n";
        if (cfg.verbosity > 0) out << "model written to " << cfg.output << "\n";
        return 0;
    } catch (const Error& e) {
        return report(e, err);
    }
}

int run_infer(const InferCliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw Error(ErrorCode::InvalidArgument, "--level must lie in (0, 1)");
        const FittedModel model = read_model(cfg.model);
        const Dataset data = load(cfg.input, cfg.response);
        if (static_cast<Eigen::Index>(data.p()) != model.a_hat.rows())
            throw Error(ErrorCode::InvalidArgument, "CSV has " + std::to_string(data.p()) +
                                                        " predictors but the model has " +
                                                        std::to_string(model.a_hat.rows()));
        const VarianceInputs in = VarianceInputs::make(model.theta_hat, model.sigma_z_hat, model.beta_hat,
                                                       model.tau_sq_hat, model.sigma_sq_hat, model.partition,
                                                       model.ridge_t);
        in.require_pairs();
        std::vector<InferenceReport> reports;
        try {
            reports = infer_all(in, data.n(), cfg.level, cfg.formula);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::HeterogeneousInputs)
                throw Error(ErrorCode::FormulaMismatch,
                            std::string(variance_formula_name(cfg.formula)) +
                                " formula needs homogeneous inputs: " + e.what());
            throw;
        }
        write_file(cfg.output, inference_csv(reports));
        for (const auto& r : reports)
            out << "beta[" << r.coordinate << "] = " << format_double(r.estimate) << "  ["
                << format_double(r.ci_lower) << ", " << format_double(r.ci_upper) << "]\n";
        if (cfg.verbosity > 0) out << "intervals written to " << cfg.output << "\n";
        return 0;
    } catch (const Error& e) {
        return report(e, err);
    }
}

int run_simulate(const SimulateCliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::vector<ExperimentConfig> configs;
        if (cfg.preset.empty()) {
            configs.push_back(cfg.experiment);
        } else if (cfg.preset == "table-main") {
            for (ExperimentConfig c : preset_table_main(cfg.experiment.reps, cfg.experiment.seed)) {
                c.delta_mode = cfg.experiment.delta_mode;
                c.delta = cfg.experiment.delta;
                c.estimation = cfg.experiment.estimation;
                c.threads = cfg.experiment.threads;
                configs.push_back(c);
            }
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown preset '" + cfg.preset + "'");
        }
        for (auto& c : configs) {
            c.dgp.validate();
            if (c.label.empty())
                c.label = "n=" + std::to_string(c.dgp.n) + " p=" + std::to_string(c.dgp.p) + " K=" +
                          std::to_string(c.dgp.k) + " m=" + std::to_string(c.dgp.m);
        }

        std::vector<ExperimentSummary> summaries;
        Index total_ok = 0;
        for (const auto& c : configs) {
            summaries.push_back(run_experiment(c));
            const ExperimentSummary& s = summaries.back();
            total_ok += s.ok;
            out << s.label << ": ok " << s.ok << "/" << s.reps << ", mean K_hat " << format_double(s.mean_k_hat)
                << ", err(beta) " << format_double(s.mean_sq_err[0]) << ", coverage "
                << format_double(s.coverage_v) << ", CI length " << format_double(s.mean_ci_length_v) << "\n";
            for (const auto& [code, count] : s.failure_codes) out << "  failed " << count << " x " << code << "\n";
        }
        write_file(cfg.out, results_csv(summaries));
        if (!cfg.hist_out.empty()) write_file(cfg.hist_out, standardized_csv(summaries));
        if (total_ok == 0) {
            err << "error: every replication failed\n";
            return static_cast<int>(ExitCode::Failure);
        }
        return 0;
    } catch (const Error& e) {
        return report(e, err);
    }
}

int run_cv_delta(const CvDeltaCliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Dataset data = load(cfg.input, cfg.response);
        const auto grid = default_delta_grid(data.n(), data.p(), cfg.grid_points, cfg.c_min, cfg.c_max);
        const CvReport rep = cv_select_delta(data, grid, cfg.seed);
        const std::string table = cv_csv(rep.records);
        if (!cfg.output.empty()) write_file(cfg.output, table);
        if (cfg.verbosity > 0) out << table;
        out << "chosen delta: " << format_double(rep.chosen_delta) << " (K_hat "
            << rep.records[rep.chosen_index].k_hat << ")\n";
        return 0;
    } catch (const Error& e) {
        return report(e, err);
    }
}

}  // namespace er
