#include "essreg/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Essential Regression: estimation and inference for latent factor regression"};
    app.set_version_flag("--version", std::string(er::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    int verbosity = 1;
    app.add_flag("-q,--quiet", [&](std::int64_t) { verbosity = 0; }, "Less output");

    // fit
    er::FitCliConfig fit;
    std::string fit_delta = "cv", fit_estimator = "main";
    auto* fit_cmd = app.add_subcommand("fit", "Estimate the model from a CSV");
    fit_cmd->add_option("input", fit.input, "Input CSV with header")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("-r,--response,--response-col", fit.response, "Response column name");
    fit_cmd->add_option("-o,--out", fit.output, "Model JSON path");
    fit_cmd->add_option("--delta", fit_delta, "cv or a positive value");
    fit_cmd->add_option("--seed", fit.seed, "Seed for the CV split");
    fit_cmd->add_option("--estimator", fit_estimator, "main, A-based, I-based or naive");
    fit_cmd->add_flag("--standardize", fit.standardize, "Scale columns to unit variance first");
    fit_cmd->add_option("--dantzig-c", fit.estimation.dantzig_c, "Constant of the loading LP radius");
    fit_cmd->add_option("--ridge", fit.estimation.ridge_t, "Ridge added when Theta^T Theta is ill conditioned");

    // infer
    er::InferCliConfig inf;
    std::string formula = "general";
    auto* inf_cmd = app.add_subcommand("infer", "Confidence intervals from a fitted model");
    inf_cmd->add_option("model", inf.model, "Model JSON")->required()->check(CLI::ExistingFile);
    inf_cmd->add_option("input", inf.input, "The CSV the model was fitted on")->required()->check(CLI::ExistingFile);
    inf_cmd->add_option("-r,--response,--response-col", inf.response, "Response column name");
    inf_cmd->add_option("-o,--out", inf.output, "Output CSV");
    inf_cmd->add_option("--level", inf.level, "Confidence level");
    inf_cmd->add_option("--formula", formula, "general, simplified, large-signal or I-based");

    // simulate
    er::SimulateCliConfig sim;
    auto& ex = sim.experiment;
    std::string sigma_z = "paper-ar", gamma = "unif", sim_delta = "cv";
    double theta = -1.0;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo study");
    sim_cmd->add_option("--n", ex.dgp.n, "Sample size");
    sim_cmd->add_option("--p", ex.dgp.p, "Number of predictors");
    sim_cmd->add_option("--k", ex.dgp.k, "Number of latent factors");
    sim_cmd->add_option("--m", ex.dgp.m, "Pure variables per factor");
    sim_cmd->add_option("--reps", ex.reps, "Replications");
    sim_cmd->add_option("--seed", ex.seed, "Base seed");
    sim_cmd->add_option("--sigma-z", sigma_z, "paper-ar, identity or ar:RHO");
    sim_cmd->add_option("--sigma-z-scale", ex.dgp.sigma_z_scale, "Scale for identity and ar:RHO");
    sim_cmd->add_option("--gamma", gamma, "unif or scalar:V");
    sim_cmd->add_option("--theta", theta, "Keep probability for the thinned columns");
    sim_cmd->add_option("--n-a", ex.dgp.weak_column_count, "Number of thinned columns");
    sim_cmd->add_option("--delta", sim_delta, "cv, a positive value, or rate for delta-c * sqrt(log(p v n)/n)");
    sim_cmd->add_option("--delta-c", ex.delta_c, "Constant for --delta rate");
    sim_cmd->add_flag("--fixed-truth", [&](std::int64_t) { ex.truth_mode = er::TruthMode::Fixed; },
                      "Draw A, Gamma and beta once");
    sim_cmd->add_option("--threads", ex.threads, "Worker threads (ER_THREADS caps)");
    sim_cmd->add_option("--level", ex.level, "Confidence level");
    sim_cmd->add_option("--out", sim.out, "Results CSV");
    sim_cmd->add_option("--hist-out", sim.hist_out, "Standardized statistics CSV");
    sim_cmd->add_option("--preset", sim.preset, "table-main");

    // cv-delta
    er::CvDeltaCliConfig cvd;
    auto* cv_cmd = app.add_subcommand("cv-delta", "Choose delta by sample splitting");
    cv_cmd->add_option("input", cvd.input, "Input CSV")->required()->check(CLI::ExistingFile);
    cv_cmd->add_option("-r,--response,--response-col", cvd.response, "Response column name");
    cv_cmd->add_option("-o,--out", cvd.output, "Grid scores CSV");
    cv_cmd->add_option("--seed", cvd.seed, "Split seed");
    cv_cmd->add_option("--points", cvd.grid_points, "Grid size");
    cv_cmd->add_option("--c-min", cvd.c_min, "Smallest multiple of sqrt(log(p v n)/n)");
    cv_cmd->add_option("--c-max", cvd.c_max, "Largest multiple");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(er::ExitCode::Validation);
    }

    try {
        if (fit_cmd->parsed()) {
            fit.verbosity = verbosity;
            fit.delta = er::parse_delta_choice(fit_delta);
            fit.estimator = er::parse_estimator_kind(fit_estimator);
            return er::run_fit(fit, std::cout, std::cerr);
        }
        if (inf_cmd->parsed()) {
            inf.verbosity = verbosity;
            inf.formula = er::parse_variance_formula(formula);
            return er::run_infer(inf, std::cout, std::cerr);
        }
        if (sim_cmd->parsed()) {
            sim.verbosity = verbosity;
            er::apply_sigma_z_flag(ex.dgp, sigma_z);
            er::apply_gamma_flag(ex.dgp, gamma);
            if (theta >= 0.0) ex.dgp.weak_column_theta = theta;
            if (sim_delta == "rate") {
                ex.delta_mode = er::DeltaMode::Fixed;
                ex.delta = 0.0;
            } else {
                const er::DeltaChoice d = er::parse_delta_choice(sim_delta);
                ex.delta_mode = d.cv ? er::DeltaMode::Cv : er::DeltaMode::Fixed;
                ex.delta = d.value;
            }
            return er::run_simulate(sim, std::cout, std::cerr);
        }
        if (cv_cmd->parsed()) {
            cvd.verbosity = verbosity;
            return er::run_cv_delta(cvd, std::cout, std::cerr);
        }
    } catch (const er::Error& e) {
        std::cerr << "error [" << e.code_name() << "]: " << e.what() << "\n";
        return er::exit_code_for(e.code());
    }
    return 0;
}
