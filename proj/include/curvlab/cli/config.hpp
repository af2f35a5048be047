#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/ambient.hpp"
#include "curvlab/surfaces.hpp"

namespace curvlab::cli {

/// Malformed or inconsistent configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Resolution {
    int coarse = 64;
    std::optional<int> fine; ///< convergence mode when set, must equal 2 * coarse
};

struct ExperimentConfig {
    std::string id;
    std::string op;
    nlohmann::json space;   ///< {"kind": ..., "n": ..., "m": ..., "q": ..., "r_max": ...}
    nlohmann::json surface; ///< {"family": ..., family parameters, "force_engine": ...}
    Resolution resolution;
    double tol = 1e-8;
    nlohmann::json params;
};

struct SuiteConfig {
    std::string id = "experiment";
    std::uint64_t seed = 1;
    std::string report_path;
    std::string csv_dir;
    std::vector<ExperimentConfig> experiments;
    nlohmann::json echo; ///< the parsed document, copied into the report
};

SuiteConfig parse_config(const nlohmann::json& doc);
SuiteConfig load_config(const std::string& path);

WarpedSpace build_space(const nlohmann::json& space);
/// Parses a surface object for the given ambient dimension.
SurfaceSpec build_surface_spec(const nlohmann::json& surface, int ambient_dim, int resolution, bool force_engine);

/// The built-in battery behind the `paper-suite` subcommand.
SuiteConfig paper_suite(std::uint64_t seed);

} // namespace curvlab::cli
