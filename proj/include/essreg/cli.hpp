#pragma once

#include "essreg/core.hpp"
#include "essreg/simulation.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace er {

inline constexpr const char* kVersion = "essreg 0.1.0";

enum class ExitCode : int { Ok = 0, Failure = 1, Validation = 2 };

struct DeltaChoice {
    bool cv = true;
    double value = 0.0;
};
DeltaChoice parse_delta_choice(const std::string& text);  // "cv" or a positive number

struct FitCliConfig {
    std::string input;
    std::string response = "y";
    std::string output = "model.json";
    DeltaChoice delta;
    std::uint64_t seed = 1;
    EstimatorKind estimator = EstimatorKind::Main;
    bool standardize = false;
    EstimationConfig estimation;
    int verbosity = 1;
};

struct InferCliConfig {
    std::string model;
    std::string input;
    std::string response = "y";
    std::string output = "inference.csv";
    double level = 0.95;
    VarianceFormula formula = VarianceFormula::General;
    int verbosity = 1;
};

struct SimulateCliConfig {
    ExperimentConfig experiment;
    std::string preset;  // "" or "table-main"
    std::string out = "results.csv";
    std::string hist_out;
    int verbosity = 1;
};

struct CvDeltaCliConfig {
    std::string input;
    std::string response = "y";
    std::string output;
    std::uint64_t seed = 1;
    Index grid_points = 30;
    double c_min = 0.05;
    double c_max = 3.0;
    int verbosity = 1;
};

// Each returns the process exit code; errors go to `err` as "error [ER_*]: ...".
int run_fit(const FitCliConfig& config, std::ostream& out, std::ostream& err);
int run_infer(const InferCliConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const SimulateCliConfig& config, std::ostream& out, std::ostream& err);
int run_cv_delta(const CvDeltaCliConfig& config, std::ostream& out, std::ostream& err);

int exit_code_for(ErrorCode code);

// "paper-ar" (banded, alternating signs), "identity", "ar:RHO"
void apply_sigma_z_flag(DgpConfig& dgp, const std::string& text);
// "unif", "scalar:V"
void apply_gamma_flag(DgpConfig& dgp, const std::string& text);

}  // namespace er
