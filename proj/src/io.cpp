#include "essreg/io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace er {

using json = nlohmann::json;

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Matrix matrix_from(const json& j, const char* name, Eigen::Index cols_if_empty = 0) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(name) + " must be an array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<Index>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw Error(ErrorCode::ParseError, std::string(name) + " has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<Index>(c)].get<double>();
    }
    return m;
}

Vector vector_from(const json& j, const char* name) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(name) + " must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Index i = 0; i < j.size(); ++i) v(ei(i)) = j[i].get<double>();
    return v;
}

double parse_number(const std::string& s, Index line, const std::string& column) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos)
        throw Error(ErrorCode::ParseError, "missing value at line " + std::to_string(line) + ", column " + column);
    const auto last = s.find_last_not_of(" \t");
    const std::string t = s.substr(first, last - first + 1);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw Error(ErrorCode::ParseError,
                    "bad number '" + t + "' at line " + std::to_string(line) + ", column " + column);
    return v;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false, field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            rec.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (field_started || !field.empty() || !rec.empty()) {
                rec.push_back(std::move(field));
                records.push_back(std::move(rec));
            }
            rec.clear();
            field.clear();
            field_started = false;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field");
    if (field_started || !field.empty() || !rec.empty()) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
    }
    return records;
}

Dataset parse_csv(const std::string& text, const std::string& response, const std::string& source) {
    const auto records = parse_csv_records(text);
    if (records.empty()) throw Error(ErrorCode::ParseError, "empty CSV (a header row is required)");
    const auto& header = records[0];
    Index ycol = header.size();
    for (Index c = 0; c < header.size(); ++c)
        if (header[c] == response) ycol = c;
    if (ycol == header.size()) throw Error(ErrorCode::MissingColumn, "response column '" + response + "' not found");

    const Index n = records.size() - 1;
    const Index p = header.size() - 1;
    Matrix x(ei(n), ei(p));
    Vector y(ei(n));
    for (Index r = 0; r < n; ++r) {
        const auto& rec = records[r + 1];
        if (rec.size() != header.size())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(r + 2) + " has " +
                                                   std::to_string(rec.size()) + " fields, expected " +
                                                   std::to_string(header.size()));
        Index xc = 0;
        for (Index c = 0; c < rec.size(); ++c) {
            const double v = parse_number(rec[c], r + 2, header[c]);
            if (c == ycol)
                y(ei(r)) = v;
            else
                x(ei(r), ei(xc++)) = v;
        }
    }
    Dataset d;
    d.x = std::move(x);
    d.y = std::move(y);
    for (Index c = 0; c < header.size(); ++c)
        if (c != ycol) d.column_names.push_back(header[c]);
    d.response_name = response;
    d.source = source;
    d.validate();
    return d;
}

Dataset read_csv(const std::string& path, const std::string& response) {
    return parse_csv(read_file(path), response, path);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (Index i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

std::string model_to_json(const FittedModel& m) {
    json j;
    j["a_hat"] = matrix_json(m.a_hat);
    j["sigma_z_hat"] = matrix_json(m.sigma_z_hat);
    j["gamma_hat"] = vector_json(m.gamma_hat);
    j["theta_hat"] = matrix_json(m.theta_hat);
    j["beta_hat"] = vector_json(m.beta_hat);
    j["sigma_sq_hat"] = m.sigma_sq_hat;
    j["tau_sq_hat"] = vector_json(m.tau_sq_hat);
    json groups = json::array();
    for (const auto& g : m.partition.groups) groups.push_back(g);
    j["partition"] = groups;
    j["estimator_kind"] = std::string(estimator_kind_name(m.estimator_kind));
    j["ridge_t"] = m.ridge_t;
    j["clip_counts"] = {{"gamma", m.clip_counts.gamma}, {"sigma", m.clip_counts.sigma}};
    j["delta"] = m.delta;
    j["n"] = m.n;
    return j.dump(2) + "\n";
}

FittedModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
    FittedModel m;
    try {
        m.beta_hat = vector_from(j.at("beta_hat"), "beta_hat");
        const Eigen::Index k = m.beta_hat.size();
        m.a_hat = matrix_from(j.at("a_hat"), "a_hat", k);
        m.sigma_z_hat = matrix_from(j.at("sigma_z_hat"), "sigma_z_hat", k);
        m.gamma_hat = vector_from(j.at("gamma_hat"), "gamma_hat");
        m.theta_hat = matrix_from(j.at("theta_hat"), "theta_hat", k);
        m.sigma_sq_hat = j.at("sigma_sq_hat").get<double>();
        m.tau_sq_hat = vector_from(j.at("tau_sq_hat"), "tau_sq_hat");
        for (const json& g : j.at("partition")) m.partition.groups.push_back(g.get<IndexSet>());
        m.estimator_kind = parse_estimator_kind(j.at("estimator_kind").get<std::string>());
        m.ridge_t = j.at("ridge_t").get<double>();
        m.clip_counts.gamma = j.at("clip_counts").at("gamma").get<Index>();
        m.clip_counts.sigma = j.at("clip_counts").at("sigma").get<Index>();
        m.delta = j.value("delta", 0.0);
        m.n = j.value("n", Index{0});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
    const Eigen::Index p = m.a_hat.rows(), k = m.beta_hat.size();
    if (m.a_hat.cols() != k || m.sigma_z_hat.rows() != k || m.sigma_z_hat.cols() != k || m.theta_hat.rows() != p ||
        m.theta_hat.cols() != k || m.tau_sq_hat.size() != p || m.gamma_hat.size() != p ||
        static_cast<Eigen::Index>(m.partition.k_hat()) != k)
        throw Error(ErrorCode::ParseError, "model JSON: inconsistent dimensions");
    for (const auto& g : m.partition.groups)
        for (Index i : g)
            if (ei(i) >= p) throw Error(ErrorCode::ParseError, "model JSON: partition index out of range");
    return m;
}

void write_model(const std::string& path, const FittedModel& model) { write_file(path, model_to_json(model)); }

FittedModel read_model(const std::string& path) { return model_from_json(read_file(path)); }

std::string inference_csv(const std::vector<InferenceReport>& reports) {
    std::string out = csv_line({"k", "beta_hat", "variance", "std_error", "z", "ci_lower", "ci_upper",
                                "level", "formula"});
    for (const auto& r : reports)
        out += csv_line({std::to_string(r.coordinate), format_double(r.estimate), format_double(r.variance),
                         format_double(r.std_error), format_double(r.z_stat), format_double(r.ci_lower),
                         format_double(r.ci_upper), format_double(r.level),
                         std::string(variance_formula_name(r.variance_formula))});
    return out;
}

std::string results_csv(const std::vector<ExperimentSummary>& summaries) {
    std::string out = csv_line({"setting", "n", "p", "k", "m", "estimator", "mean_l2", "mean_sq_err", "coverage",
                                "mean_ci_length", "mean_k_hat", "frac_k_correct", "reps", "ok", "failed"});
    for (const auto& s : summaries) {
        for (Index e = 0; e < kAllEstimators.size(); ++e) {
            const EstimatorKind kind = kAllEstimators[e];
            std::string coverage, length;
            if (kind == EstimatorKind::Main && s.ci_count) {
                coverage = format_double(s.coverage_v);
                length = format_double(s.mean_ci_length_v);
            } else if (kind == EstimatorKind::IBased && s.ci_count_u) {
                coverage = format_double(s.coverage_u);
                length = format_double(s.mean_ci_length_u);
            }
            const bool has = s.error_count[e] > 0;
            out += csv_line({s.label, std::to_string(s.dgp.n), std::to_string(s.dgp.p), std::to_string(s.dgp.k),
                             std::to_string(s.dgp.m), std::string(estimator_kind_name(kind)),
                             has ? format_double(s.mean_l2[e]) : "", has ? format_double(s.mean_sq_err[e]) : "",
                             coverage, length, format_double(s.mean_k_hat), format_double(s.frac_k_correct),
                             std::to_string(s.reps), std::to_string(s.ok), std::to_string(s.failed)});
        }
    }
    return out;
}

std::string standardized_csv(const std::vector<ExperimentSummary>& summaries) {
    std::string out = csv_line({"setting", "rep", "k_hat", "standardized_stat", "scaled_error", "variance"});
    for (const auto& s : summaries)
        for (const auto& r : s.replications)
            if (r.ok && r.has_ci)
                out += csv_line({s.label, std::to_string(r.rep), std::to_string(r.k_hat),
                                 format_double(r.standardized_v), format_double(r.scaled_error),
                                 format_double(r.variance_v)});
    return out;
}

std::string cv_csv(const std::vector<CvRecord>& records) {
    std::string out = csv_line({"delta", "k_hat", "cv_score"});
    for (const auto& r : records)
        out += csv_line({format_double(r.delta), std::to_string(r.k_hat),
                         std::isfinite(r.cv_score) ? format_double(r.cv_score) : "inf"});
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace er
