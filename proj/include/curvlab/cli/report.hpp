#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab::cli {

enum class Verdict { Pass, Fail, Skipped, Violated, Info };

const char* to_string(Verdict v);

/// Only Pass and Info count as success.
bool is_success(Verdict v);

struct ProfileRow {
    double r = 0.0;
    double value = 0.0;
    double weight = 0.0;
    long long group = 0;
    std::string verdict;
};

struct ProfileTable {
    std::string quantity;
    std::vector<ProfileRow> rows;
};

struct CheckRecord {
    std::string name;
    Verdict verdict = Verdict::Info;
    nlohmann::json values = nlohmann::json::object();
    std::string note;
};

struct ExperimentRecord {
    std::string id;
    std::string op;
    std::vector<CheckRecord> checks;
    std::vector<ProfileTable> tables;
    Verdict verdict() const;
};

struct VerificationReport {
    static constexpr int schema_version = 1;
    std::string id;
    std::string timestamp;
    nlohmann::json config;
    std::vector<ExperimentRecord> experiments;

    bool overall_pass() const;
    nlohmann::json to_json() const;
};

std::string utc_timestamp();

/// Columns: r,value,weight,group,verdict.
std::string to_csv(const ProfileTable& table);

/// Writes the report and one CSV per table (named <experiment>_<quantity>.csv).
void write_outputs(const VerificationReport& report, const std::string& report_path, const std::string& csv_dir);

/// Single-panel SVG line plot of a profile table found in a report JSON.
std::string plot_svg(const nlohmann::json& report, const std::string& quantity);

} // namespace curvlab::cli
