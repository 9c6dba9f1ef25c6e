#pragma once

#include "essreg/core.hpp"
#include "essreg/pure_variables.hpp"
#include "essreg/simulation.hpp"

#include <string>
#include <vector>

namespace er {

// Header row required. Every column other than `response` becomes a column of x.
Dataset read_csv(const std::string& path, const std::string& response);
Dataset parse_csv(const std::string& text, const std::string& response, const std::string& source = "");

// RFC-4180 record splitting (quoted fields, doubled quotes, CRLF).
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text);

std::string format_double(double v);  // 17 significant digits
std::string csv_field(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);

std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text);
void write_model(const std::string& path, const FittedModel& model);
FittedModel read_model(const std::string& path);

std::string inference_csv(const std::vector<InferenceReport>& reports);
std::string results_csv(const std::vector<ExperimentSummary>& summaries);
std::string standardized_csv(const std::vector<ExperimentSummary>& summaries);
std::string cv_csv(const std::vector<CvRecord>& records);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace er
